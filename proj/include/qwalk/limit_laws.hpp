#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "qwalk/grid.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

inline constexpr double kKappa = 0.79788456080286535588;  // sqrt(2/pi)

double halfnormal_cdf(double x);
double rayleigh_cdf(double x);
double geometric_pmf(double alpha, int r);
// k / 2^{k+1} on k >= 1; ZeroUnsupported for r = 0.
double negbin_pmf(int r);
// Limit of P(N_n = r | tau > n) for the 1D walk with up-probability p.
double meander_1d_pmf(double p, Parity parity, int r);

// Per-axis marginal descriptors. Continuous laws are stored as unit laws; the
// caller rescales counts by the appropriate a_n.
struct HalfNormal {};
struct Rayleigh {};
struct Geometric {
  double alpha;
};
struct NegBinomial2Half {};
struct MeanderMixture1D {
  double p;
  Parity parity;
};
// (phi(0, r) + w phi(1, r)) / (1 + w): the even and odd 1D meander limits
// blended with weight w. Arises as a marginal of the 2D meander limits.
struct ParityBlend1D {
  double p;
  double weight;
};

using Marginal =
    std::variant<HalfNormal, Rayleigh, Geometric, NegBinomial2Half, MeanderMixture1D, ParityBlend1D>;

bool is_discrete(const Marginal& m);
double marginal_pmf(const Marginal& m, int r);
// Continuous laws: cdf at x. Discrete laws: P(X <= floor(x)).
double marginal_cdf(const Marginal& m, double x);
// Certified bound on P(X > r_max) for discrete laws.
double marginal_tail(const Marginal& m, int r_max);
// Smallest r_max whose tail bound is below tail.
int support_bound(const Marginal& m, double tail);
std::string describe(const Marginal& m);

struct AxisConstants {
  Drift drift;
  double tilde_p;
  double tilde_q;
  double h;
  // Exponential rate of P(tau_i > n): 1 for non-negative drift, else sqrt(4 p~ q~).
  double rho;
  // Polynomial exponent: 0, 1/2 or 3/2 for positive, zero, negative drift.
  double alpha;
  double c_even;
  double c_odd;
  double a;  // 2 p~
  double b;  // 1 / (2 q~)

  double c(Parity parity) const { return parity == Parity::Even ? c_even : c_odd; }
  // phi_i(parity, r): limit of P(N = r | tau > n) along lengths of that parity.
  double phi(Parity parity, int r) const;
};

struct LimitConstants {
  double kappa = kKappa;
  std::array<AxisConstants, 2> axes;
  double theta;

  const AxisConstants& axis(int i) const { return axes.at(static_cast<std::size_t>(i - 1)); }
};

LimitConstants limit_constants(const StepDistribution& walk);

enum class LimitStructure { ProductOfMarginals, Mixture2D };

class LimitLaw {
 public:
  static LimitLaw product(Marginal first, Marginal second);
  static LimitLaw meander_mixture(const LimitConstants& constants, Parity parity);

  LimitStructure structure() const { return structure_; }
  const Marginal& marginal(int axis) const { return marginals_.at(static_cast<std::size_t>(axis - 1)); }
  bool discrete() const { return is_discrete(marginals_[0]) && is_discrete(marginals_[1]); }

  // Joint pmf; both marginals must be discrete.
  double pmf(int r1, int r2) const;

  // Truncated table with tail_bound >= mass outside it.
  struct Table {
    Grid<double> mass;
    double tail_bound;
  };
  Table tabulate(double tail = 1e-13) const;

  std::string describe() const;

 private:
  LimitStructure structure_ = LimitStructure::ProductOfMarginals;
  std::array<Marginal, 2> marginals_{HalfNormal{}, HalfNormal{}};
  std::optional<LimitConstants> constants_;
  Parity parity_ = Parity::Even;
};

// Limit of (N1_n / a1_n, N2_n / a2_n) under the conditioning.
LimitLaw limit_joint(const StepDistribution& walk, Conditioning conditioning, Parity parity);

// Rescaling a_n per axis: sqrt(h_i n) where the limit is continuous, else 1.
std::array<double, 2> rescale_factors(const StepDistribution& walk, Conditioning conditioning, long n);

// Asymptotic approximant of P(tau > n) (not the exact probability).
double tau_asymptote(const StepDistribution& walk, long n);
double log_tau_asymptote(const StepDistribution& walk, long n);

// Convolution asymptotics check on a_k = a/(k+1)^s, b_k = b/(k+1)^s:
// returns (sum_{k<=n} a_k b_{n-k}, (A b + a B)/n^s) with A, B the full sums.
std::pair<double, double> convolution_asymptotics_check(double exponent, double a, double b, long n);

}  // namespace qwalk
