#pragma once

#include <cstdint>

#include "qwalk/grid.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

enum class SampleMethod { Rejection, Tilted };

const char* to_string(SampleMethod method);
SampleMethod parse_sample_method(std::string_view text);

// Rejection runs whose forecast acceptance falls below this are refused by
// the command line unless forced.
inline constexpr double kRefusalThreshold = 1e-8;

struct EmpiricalLaw {
  int n = 0;
  Conditioning conditioning = Conditioning::Unconditioned;
  SampleMethod method = SampleMethod::Rejection;
  std::uint64_t seed = 0;
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  // Accepted paths per cell, and their summed weights (equal to the counts
  // in rejection mode) and squared weights.
  Grid<std::uint64_t> counts;
  Grid<double> weight;
  Grid<double> weight_sq;
  double total_weight = 0.0;
  // No trial satisfied the conditioning.
  bool budget_exhausted = false;

  double acceptance_rate() const;
  // Self-normalised estimate of P(N1 = r1, N2 = r2 | event).
  double normalized(int r1, int r2) const;
  Grid<double> normalized_table() const;
  // Unbiased estimate of P(N1 = r1, N2 = r2, event) and its standard error.
  double joint_estimate(int r1, int r2) const;
  double joint_standard_error(int r1, int r2) const;
};

struct SampleOptions {
  SampleMethod method = SampleMethod::Rejection;
  // 0 reads QWALK_THREADS.
  unsigned lanes = 0;
};

EmpiricalLaw sample(int n, const StepDistribution& walk, Conditioning conditioning, std::uint64_t seed,
                    std::uint64_t trials, const SampleOptions& options = {});

// Order-of-magnitude estimate of the probability of the conditioning event.
double acceptance_forecast(int n, const StepDistribution& walk, Conditioning conditioning);

}  // namespace qwalk
