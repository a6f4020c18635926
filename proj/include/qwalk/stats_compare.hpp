#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qwalk/grid.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/shuffle_engine.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

// A pmf on a finite box plus a bound on the mass it leaves out.
struct DiscreteLaw {
  Grid<double> mass;
  double tail_bound = 0.0;

  static DiscreteLaw from_vector(const std::vector<double>& pmf, double tail_bound = 0.0);
  static DiscreteLaw from_limit(const LimitLaw& law, double tail = 1e-13);
  static DiscreteLaw from_marginal(const Marginal& m, double tail = 1e-13);
  // Conditional law, with the engine remainder as its tail bound.
  static DiscreteLaw from_joint(const JointReturnLaw& law);

  double total() const;
  std::vector<double> marginal(int axis) const;
};

struct Distance {
  double value = 0.0;
  // Unresolved mass that the true distance may add to value.
  double slack = 0.0;

  double upper() const { return std::min(1.0, value + slack); }
};

// (1/2) sum |a - b| over the union of supports; slack is half the summed tail bounds.
Distance tv_distance(const DiscreteLaw& a, const DiscreteLaw& b);

// sup over r of |P(count <= r) - cdf(r / scale)| for a law on r = 0, 1, ...
Distance ks_rescaled(const std::vector<double>& pmf, double scale, const std::function<double(double)>& limit_cdf,
                     double tail_bound = 0.0);

// TV between a 2D law and the product of its own marginals.
Distance independence_gap(const DiscreteLaw& law);

enum class DistanceKind { TV, KS };
const char* to_string(DistanceKind kind);

struct ConvergenceRow {
  int n = 0;
  DistanceKind kind = DistanceKind::TV;
  Distance distance;
  Conditioning conditioning = Conditioning::Unconditioned;
  Parity parity = Parity::Even;
  std::array<double, 2> rescale{1.0, 1.0};
};

struct SweepOptions {
  JointLawOptions engine;
  // Meander only: the limit branch to compare against; parity of n otherwise.
  std::optional<Parity> parity;
};

// Distance between the exact law at length n and its limit. Discrete limits
// use the joint TV. When some axis has a continuous limit the row is KS: the
// largest marginal distance, KS on continuous axes and TV on discrete ones.
ConvergenceRow compare_to_limit(int n, const StepDistribution& walk, Conditioning conditioning,
                                const SweepOptions& options = {});

std::vector<ConvergenceRow> sweep(const std::vector<int>& ns, const StepDistribution& walk,
                                  Conditioning conditioning, const SweepOptions& options = {});

}  // namespace qwalk
