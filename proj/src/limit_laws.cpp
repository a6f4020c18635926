#include "qwalk/limit_laws.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

// (lead + slope r) / 2^{r+1}, the shape shared by every negative-drift
// meander limit.
double linear_over_power(double lead, double slope, int r) {
  return (lead + slope * r) * std::ldexp(1.0, -(r + 1));
}

// sum_{r > r_max} (lead + slope r) / 2^{r+1}, for lead, slope >= 0.
double linear_over_power_tail(double lead, double slope, int r_max) {
  return (lead + slope * (r_max + 2.0)) * std::ldexp(1.0, -(r_max + 1));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double phi_negative(double p, Parity parity, int r) {
  const double q = 1.0 - p;
  const double lead = parity == Parity::Even ? 2.0 * p : 1.0 / (2.0 * q);
  return linear_over_power(lead, 1.0 - lead, r);
}

double phi_negative_tail(double p, Parity parity, int r_max) {
  const double q = 1.0 - p;
  const double lead = parity == Parity::Even ? 2.0 * p : 1.0 / (2.0 * q);
  return linear_over_power_tail(lead, 1.0 - lead, r_max);
}

}  // namespace

double halfnormal_cdf(double x) {
  if (x < 0.0) fail(ErrorCode::NegativeArgument, "half-normal cdf needs x >= 0");
  return std::erf(x / std::sqrt(2.0));
}

double rayleigh_cdf(double x) {
  if (x < 0.0) fail(ErrorCode::NegativeArgument, "Rayleigh cdf needs x >= 0");
  return -std::expm1(-0.5 * x * x);
}

double geometric_pmf(double alpha, int r) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::OutOfRange, "geometric parameter must lie in (0,1]");
  if (r < 0) return 0.0;
  return alpha * std::pow(1.0 - alpha, r);
}

double negbin_pmf(int r) {
  if (r == 0) fail(ErrorCode::ZeroUnsupported, "BN(2,1/2) is supported on r >= 1");
  if (r < 0) return 0.0;
  return r * std::ldexp(1.0, -(r + 1));
}

double meander_1d_pmf(double p, Parity parity, int r) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0,1)");
  if (r < 0) return 0.0;
  const double q = 1.0 - p;
  if (p >= q) return p * std::pow(q, r);
  return phi_negative(p, parity, r);
}

bool is_discrete(const Marginal& m) {
  return !std::holds_alternative<HalfNormal>(m) && !std::holds_alternative<Rayleigh>(m);
}

double marginal_pmf(const Marginal& m, int r) {
  if (r < 0) return 0.0;
  return std::visit(
      Overloaded{
          [](const HalfNormal&) -> double { fail(ErrorCode::InvalidArgument, "half-normal has no pmf"); },
          [](const Rayleigh&) -> double { fail(ErrorCode::InvalidArgument, "Rayleigh has no pmf"); },
          [r](const Geometric& g) { return geometric_pmf(g.alpha, r); },
          [r](const NegBinomial2Half&) { return r == 0 ? 0.0 : negbin_pmf(r); },
          [r](const MeanderMixture1D& mm) { return meander_1d_pmf(mm.p, mm.parity, r); },
          [r](const ParityBlend1D& b) {
            return (phi_negative(b.p, Parity::Even, r) + b.weight * phi_negative(b.p, Parity::Odd, r)) /
                   (1.0 + b.weight);
          },
      },
      m);
}

double marginal_cdf(const Marginal& m, double x) {
  if (const auto* hn = std::get_if<HalfNormal>(&m)) {
    (void)hn;
    return halfnormal_cdf(x);
  }
  if (std::holds_alternative<Rayleigh>(m)) return rayleigh_cdf(x);
  if (x < 0.0) return 0.0;
  if (const auto* g = std::get_if<Geometric>(&m)) {
    return -std::expm1((std::floor(x) + 1.0) * std::log1p(-g->alpha));
  }
  const int top = static_cast<int>(std::floor(x));
  double sum = 0.0;
  for (int r = 0; r <= top; ++r) {
    const double v = marginal_pmf(m, r);
    sum += v;
    if (r > 64 && marginal_tail(m, r) < 1e-17) break;
  }
  return std::min(sum, 1.0);
}

double marginal_tail(const Marginal& m, int r_max) {
  return std::visit(
      Overloaded{
          [](const HalfNormal&) -> double { fail(ErrorCode::InvalidArgument, "continuous law"); },
          [](const Rayleigh&) -> double { fail(ErrorCode::InvalidArgument, "continuous law"); },
          [r_max](const Geometric& g) { return std::pow(1.0 - g.alpha, r_max + 1); },
          [r_max](const NegBinomial2Half&) { return linear_over_power_tail(0.0, 1.0, r_max); },
          [r_max](const MeanderMixture1D& mm) {
            if (mm.p >= 0.5) return std::pow(1.0 - mm.p, r_max + 1);
            return phi_negative_tail(mm.p, mm.parity, r_max);
          },
          [r_max](const ParityBlend1D& b) {
            return (phi_negative_tail(b.p, Parity::Even, r_max) +
                    b.weight * phi_negative_tail(b.p, Parity::Odd, r_max)) /
                   (1.0 + b.weight);
          },
      },
      m);
}

int support_bound(const Marginal& m, double tail) {
  int r = 0;
  while (marginal_tail(m, r) > tail) {
    ++r;
    if (r > 100000) fail(ErrorCode::OutOfRange, "tail does not decay fast enough");
  }
  return r;
}

std::string describe(const Marginal& m) {
  std::ostringstream out;
  out.precision(10);
  std::visit(Overloaded{
                 [&](const HalfNormal&) { out << "HalfNormal"; },
                 [&](const Rayleigh&) { out << "Rayleigh"; },
                 [&](const Geometric& g) { out << "Geometric(" << g.alpha << ")"; },
                 [&](const NegBinomial2Half&) { out << "NegBinomial(2,1/2)"; },
                 [&](const MeanderMixture1D& mm) {
                   out << "MeanderMixture1D(p=" << mm.p << "," << to_string(mm.parity) << ")";
                 },
                 [&](const ParityBlend1D& b) { out << "ParityBlend1D(p=" << b.p << ",w=" << b.weight << ")"; },
             },
             m);
  return out.str();
}

double AxisConstants::phi(Parity parity, int r) const {
  if (r < 0) return 0.0;
  if (drift != Drift::Negative) return tilde_p * std::pow(tilde_q, r);
  return phi_negative(tilde_p, parity, r);
}

LimitConstants limit_constants(const StepDistribution& walk) {
  LimitConstants out;
  for (int i : {1, 2}) {
    AxisConstants ax;
    ax.drift = walk.drift(i);
    ax.tilde_p = walk.tilde_p(i);
    ax.tilde_q = walk.tilde_q(i);
    ax.h = walk.h(i);
    ax.a = 2.0 * ax.tilde_p;
    ax.b = 1.0 / (2.0 * ax.tilde_q);
    switch (ax.drift) {
      case Drift::Positive:
        ax.rho = 1.0;
        ax.alpha = 0.0;
        ax.c_even = ax.c_odd = (ax.tilde_p - ax.tilde_q) / ax.tilde_p;
        break;
      case Drift::Zero:
        ax.rho = 1.0;
        ax.alpha = 0.5;
        ax.c_even = ax.c_odd = kKappa;
        break;
      case Drift::Negative: {
        ax.rho = std::sqrt(4.0 * ax.tilde_p * ax.tilde_q);
        ax.alpha = 1.5;
        ax.c_even = kKappa * std::sqrt(ax.tilde_q / ax.tilde_p) * ax.rho / (1.0 - ax.rho * ax.rho);
        ax.c_odd = ax.rho * ax.c_even;
        break;
      }
    }
    out.axes[static_cast<std::size_t>(i - 1)] = ax;
  }
  out.theta = out.axes[0].rho * out.axes[0].h + out.axes[1].rho * out.axes[1].h;
  return out;
}

LimitLaw LimitLaw::product(Marginal first, Marginal second) {
  LimitLaw law;
  law.structure_ = LimitStructure::ProductOfMarginals;
  law.marginals_ = {std::move(first), std::move(second)};
  return law;
}

LimitLaw LimitLaw::meander_mixture(const LimitConstants& constants, Parity parity) {
  const AxisConstants& a1 = constants.axis(1);
  const AxisConstants& a2 = constants.axis(2);
  if (a1.drift != Drift::Negative || a2.drift != Drift::Negative) {
    fail(ErrorCode::InvalidArgument, "the 2D meander mixture needs both drifts negative");
  }
  LimitLaw law;
  law.structure_ = LimitStructure::Mixture2D;
  law.constants_ = constants;
  law.parity_ = parity;
  if (parity == Parity::Even) {
    law.marginals_ = {ParityBlend1D{a1.tilde_p, a1.rho * a2.rho}, ParityBlend1D{a2.tilde_p, a1.rho * a2.rho}};
  } else {
    law.marginals_ = {ParityBlend1D{a1.tilde_p, a1.rho / a2.rho}, ParityBlend1D{a2.tilde_p, a2.rho / a1.rho}};
  }
  return law;
}

double LimitLaw::pmf(int r1, int r2) const {
  if (!discrete()) fail(ErrorCode::InvalidArgument, "joint pmf needs discrete marginals");
  if (r1 < 0 || r2 < 0) return 0.0;
  if (structure_ == LimitStructure::ProductOfMarginals) {
    return marginal_pmf(marginals_[0], r1) * marginal_pmf(marginals_[1], r2);
  }
  const AxisConstants& a1 = constants_->axis(1);
  const AxisConstants& a2 = constants_->axis(2);
  // Parity of the two extracted lengths: equal for even n, opposite for odd n.
  const Parity flip = parity_ == Parity::Even ? Parity::Odd : Parity::Even;
  const Parity second_of_even = parity_ == Parity::Even ? Parity::Even : Parity::Odd;
  const double w0 = a1.c(Parity::Even) * a2.c(second_of_even);
  const double w1 = a1.c(Parity::Odd) * a2.c(flip);
  return (w0 * a1.phi(Parity::Even, r1) * a2.phi(second_of_even, r2) +
          w1 * a1.phi(Parity::Odd, r1) * a2.phi(flip, r2)) /
         (w0 + w1);
}

LimitLaw::Table LimitLaw::tabulate(double tail) const {
  if (!discrete()) fail(ErrorCode::InvalidArgument, "only discrete laws can be tabulated");
  const int r1 = support_bound(marginals_[0], tail / 2.0);
  const int r2 = support_bound(marginals_[1], tail / 2.0);
  Table out{Grid<double>(r1 + 1, r2 + 1, 0.0), marginal_tail(marginals_[0], r1) + marginal_tail(marginals_[1], r2)};
  for (int i = 0; i <= r1; ++i)
    for (int j = 0; j <= r2; ++j) out.mass(i, j) = pmf(i, j);
  return out;
}

std::string LimitLaw::describe() const {
  if (structure_ == LimitStructure::Mixture2D) {
    std::ostringstream out;
    out.precision(10);
    const auto& c = *constants_;
    out << "Mixture2D(" << to_string(parity_) << ",rho1=" << c.axis(1).rho << ",rho2=" << c.axis(2).rho
        << ")";
    return out.str();
  }
  return qwalk::describe(marginals_[0]) + " x " + qwalk::describe(marginals_[1]);
}

LimitLaw limit_joint(const StepDistribution& walk, Conditioning conditioning, Parity parity) {
  switch (conditioning) {
    case Conditioning::Unconditioned: {
      auto axis_law = [&](int i) -> Marginal {
        if (walk.drift(i) == Drift::Zero) return HalfNormal{};
        return Geometric{std::abs(walk.p(i) - walk.q(i)) / walk.h(i)};
      };
      return LimitLaw::product(axis_law(1), axis_law(2));
    }
    case Conditioning::Bridge:
      return LimitLaw::product(Rayleigh{}, Rayleigh{});
    case Conditioning::NonNegativeBridge:
      return LimitLaw::product(NegBinomial2Half{}, NegBinomial2Half{});
    case Conditioning::Meander: {
      const LimitConstants constants = limit_constants(walk);
      const bool neg1 = walk.drift(1) == Drift::Negative;
      const bool neg2 = walk.drift(2) == Drift::Negative;
      if (neg1 && neg2) return LimitLaw::meander_mixture(constants, parity);
      // One negative axis: its two parity classes are weighted by c(1)/c(0) = rho
      // whatever the parity of n, and the other axis stays geometric.
      auto axis_law = [&](int i) -> Marginal {
        const AxisConstants& ax = constants.axis(i);
        if (ax.drift == Drift::Negative) return ParityBlend1D{ax.tilde_p, ax.rho};
        return Geometric{ax.tilde_p};
      };
      return LimitLaw::product(axis_law(1), axis_law(2));
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown conditioning");
}

std::array<double, 2> rescale_factors(const StepDistribution& walk, Conditioning conditioning, long n) {
  std::array<double, 2> out{1.0, 1.0};
  for (int i : {1, 2}) {
    const bool continuous = conditioning == Conditioning::Bridge ||
                            (conditioning == Conditioning::Unconditioned && walk.drift(i) == Drift::Zero);
    if (continuous) out[static_cast<std::size_t>(i - 1)] = std::sqrt(walk.h(i) * static_cast<double>(n));
  }
  return out;
}

double log_tau_asymptote(const StepDistribution& walk, long n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "tau asymptote needs n >= 1");
  const LimitConstants c = limit_constants(walk);
  const AxisConstants& a1 = c.axis(1);
  const AxisConstants& a2 = c.axis(2);
  const double mixing = parity_of(n) == Parity::Even
                            ? 0.5 * (a1.c_even * a2.c_even + a1.c_odd * a2.c_odd)
                            : 0.5 * (a1.c_even * a2.c_odd + a1.c_odd * a2.c_even);
  const double x = a1.rho * a1.h / c.theta;
  const double log_f = -a1.alpha * std::log(x) - a2.alpha * std::log1p(-x);
  const double nd = static_cast<double>(n);
  return nd * std::log(c.theta) - (a1.alpha + a2.alpha) * std::log(nd) + std::log(mixing) + log_f;
}

double tau_asymptote(const StepDistribution& walk, long n) { return std::exp(log_tau_asymptote(walk, n)); }

std::pair<double, double> convolution_asymptotics_check(double exponent, double a, double b, long n) {
  if (!(exponent > 1.0)) fail(ErrorCode::InvalidArgument, "exponent must exceed 1");
  if (!(a > 0.0 && b > 0.0)) fail(ErrorCode::InvalidArgument, "a and b must be positive");
  if (n < 1) fail(ErrorCode::InvalidArgument, "need n >= 1");
  double lhs = 0.0;
  for (long k = 0; k <= n; ++k) {
    lhs += a * std::pow(static_cast<double>(k + 1), -exponent) * b *
           std::pow(static_cast<double>(n - k + 1), -exponent);
  }
  // zeta(exponent) = sum_{j>=1} j^-s: direct sum to M, Euler-Maclaurin tail.
  constexpr long kTerms = 1000000;
  double zeta = 0.0;
  for (long j = kTerms; j >= 1; --j) zeta += std::pow(static_cast<double>(j), -exponent);
  const double m = static_cast<double>(kTerms);
  zeta += std::pow(m, 1.0 - exponent) / (exponent - 1.0) - 0.5 * std::pow(m, -exponent) +
          exponent * std::pow(m, -exponent - 1.0) / 12.0;
  const double big_a = a * zeta;
  const double big_b = b * zeta;
  const double rhs = (big_a * b + a * big_b) / std::pow(static_cast<double>(n), exponent);
  return {lhs, rhs};
}

}  // namespace qwalk
