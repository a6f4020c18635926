#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qwalk/grid.hpp"
#include "qwalk/rational.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

// Binomial window [alpha n, beta n] for H_n ~ Bin(n, h) with a Chernoff
// bound on the mass outside it.
struct BinomialWindow {
  int n = 0;
  double h = 0.5;
  double alpha = 0.0;
  double beta = 1.0;
  // Per-step rate: max(exp(-KL(alpha||h)), exp(-KL(beta||h))).
  double nu = 0.0;
  // exp(-n KL(alpha||h)) + exp(-n KL(beta||h)), capped at 1; at most 2 nu^n.
  double tail_bound = 1.0;

  int k_low() const;
  int k_high() const;
};

// Requires 0 <= alpha < h < beta <= 1, otherwise WindowViolation.
BinomialWindow make_window(int n, double h, double alpha, double beta);
// [h/2, (1+h)/2].
BinomialWindow default_window(int n, double h);

enum class ConvolutionMode { Exact, Windowed };

// Joint law of the return counts (N1_n, N2_n) together with the conditioning
// event. joint(r1, r2) = P(N1 = r1, N2 = r2, event); conditional() divides by
// the event probability. Float tables are stored scaled: joint = scaled *
// exp(log_scale).
class JointReturnLaw {
 public:
  JointReturnLaw(int n, StepDistribution walk, Conditioning conditioning, Backend backend);

  int length() const { return n_; }
  const StepDistribution& walk() const { return walk_; }
  Conditioning conditioning() const { return conditioning_; }
  Backend backend() const { return backend_; }

  // Table extent: r1 in [0, rows), r2 in [0, cols).
  int rows() const { return scaled_.rows(); }
  int cols() const { return scaled_.cols(); }

  double joint(int r1, int r2) const;
  double conditional(int r1, int r2) const;
  double event_probability() const;
  double log_event_probability() const;

  bool is_exact() const { return exact_.has_value(); }
  Rational exact_joint(int r1, int r2) const;
  Rational exact_conditional(int r1, int r2) const;
  Rational exact_event_probability() const;

  // Upper bound on the total joint mass missing from the table (0 when exact).
  double truncation_remainder() const { return remainder_; }
  // Same bound expressed on the conditional law.
  double conditional_remainder() const;

  // Conditional marginal law of N^axis_n.
  std::vector<double> conditional_marginal(int axis) const;
  Grid<double> conditional_table() const;

  // Construction helpers used by the engines.
  void set_float(Grid<double> scaled, double log_scale, double remainder);
  void set_exact(Grid<Rational> cells);

 private:
  int n_;
  StepDistribution walk_;
  Conditioning conditioning_;
  Backend backend_;
  Grid<double> scaled_;
  double log_scale_ = 0.0;
  double scaled_total_ = 0.0;
  double remainder_ = 0.0;
  std::optional<Grid<Rational>> exact_;
  Rational exact_total_;
};

struct JointLawOptions {
  ConvolutionMode mode = ConvolutionMode::Exact;
  // Windowed mode only; default_window(n, h1) when absent.
  std::optional<BinomialWindow> window;
  // Force a backend instead of select_backend().
  std::optional<Backend> backend;
  EngineConfig config;
};

// P(N1 = r1, N2 = r2, event) = sum_k C(n,k) h1^k h2^(n-k) P1(r1, event at k) P2(r2, event at n-k),
// with the 1D factors taken at the extracted parameters. Windowed mode
// restricts k to the window and records its Chernoff bound as the remainder.
JointReturnLaw joint_law(int n, const StepDistribution& walk, Conditioning conditioning,
                         const JointLawOptions& options = {});

// P(tau > n) for the quadrant exit time.
double exit_probability(int n, const StepDistribution& walk);
double log_exit_probability(int n, const StepDistribution& walk);
Rational exact_exit_probability(int n, const StepDistribution& walk);

// sum over alpha n <= k <= beta n with k = b (mod a) of f(k/n) C(n,k) h^k (1-h)^(n-k).
double bernstein_sum(const std::function<double(double)>& f, double h, int a, int b, int n,
                     double alpha, double beta);

}  // namespace qwalk
