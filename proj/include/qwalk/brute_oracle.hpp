#pragma once

#include "qwalk/shuffle_engine.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

inline constexpr int kOracleMaxLength = 14;

struct OracleOptions {
  // Which coordinates the survival flag watches. Leaving axis 2 out gives the
  // half-plane variant used to project the oracle onto one axis.
  bool survival_axis1 = true;
  bool survival_axis2 = true;
};

// Exact joint law by stepping a DP over (x, y, r1, r2, survived) in rational
// arithmetic; terminal states are filtered by the conditioning. Requires an
// exact walk and n <= kOracleMaxLength (CapTooLarge otherwise).
JointReturnLaw enumerate_joint(int n, const StepDistribution& walk, Conditioning conditioning,
                               const OracleOptions& options = {});

}  // namespace qwalk
