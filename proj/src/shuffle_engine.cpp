#include "qwalk/shuffle_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "qwalk/error.hpp"
#include "qwalk/oned_engine.hpp"

namespace qwalk {

namespace {

constexpr double kNegligibleWeight = 1e-40;

// Bin(n, h) pmf, built outward from the mode with the ratio recurrence and
// normalised by its own sum. Far-tail entries underflow to zero.
std::vector<double> binomial_pmf(int n, double h) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * h)), 0, n);
  const double odds = h / (1.0 - h);
  pmf[mode] = 1.0;
  for (int k = mode; k < n; ++k) {
    pmf[k + 1] = pmf[k] * odds * static_cast<double>(n - k) / (k + 1);
    if (pmf[k + 1] < 1e-320) break;
  }
  for (int k = mode; k > 0; --k) {
    pmf[k - 1] = pmf[k] / odds * static_cast<double>(k) / (n - k + 1);
    if (pmf[k - 1] < 1e-320) break;
  }
  double total = 0.0;
  for (double v : pmf) total += v;
  for (double& v : pmf) v /= total;
  return pmf;
}

double kl_bernoulli(double a, double h) {
  double out = 0.0;
  if (a > 0.0) out += a * std::log(a / h);
  if (a < 1.0) out += (1.0 - a) * std::log((1.0 - a) / (1.0 - h));
  return out;
}

OneDimEvent event_for(Conditioning conditioning) {
  switch (conditioning) {
    case Conditioning::Unconditioned: return OneDimEvent::Any;
    case Conditioning::Bridge: return OneDimEvent::EndpointZero;
    case Conditioning::Meander: return OneDimEvent::Survival;
    case Conditioning::NonNegativeBridge: return OneDimEvent::SurvivalEndpointZero;
  }
  return OneDimEvent::Any;
}

BigInt to_integer(const Rational& v) {
  if (v.get_den() != 1) fail(ErrorCode::InvalidArgument, "expected an integer");
  return v.get_num();
}

JointReturnLaw exact_joint_law(int n, const StepDistribution& walk, Conditioning conditioning) {
  const BigInt den = walk.common_denominator();
  const OneDimEvent event = event_for(conditioning);
  const auto w1 = integer_profiles(n, to_integer(walk.exact_p(1) * den),
                                   to_integer(walk.exact_q(1) * den), event);
  const auto w2 = integer_profiles(n, to_integer(walk.exact_p(2) * den),
                                   to_integer(walk.exact_q(2) * den), event);
  const int extent = n / 2 + 1;
  Grid<BigInt> numer(extent, extent, BigInt(0));
  BigInt term;
  for (int k = 0; k <= n; ++k) {
    const BigInt c = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    const auto& a = w1[k];
    const auto& b = w2[n - k];
    for (std::size_t r1 = 0; r1 < a.size(); ++r1) {
      if (sgn(a[r1]) == 0) continue;
      const BigInt left = c * a[r1];
      for (std::size_t r2 = 0; r2 < b.size(); ++r2) {
        if (sgn(b[r2]) == 0) continue;
        mpz_mul(term.get_mpz_t(), left.get_mpz_t(), b[r2].get_mpz_t());
        numer(static_cast<int>(r1), static_cast<int>(r2)) += term;
      }
    }
  }
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
  Grid<Rational> cells(extent, extent, Rational(0));
  for (int r1 = 0; r1 < extent; ++r1)
    for (int r2 = 0; r2 < extent; ++r2) {
      Rational& cell = cells(r1, r2);
      cell = Rational(numer(r1, r2), scale);
      cell.canonicalize();
    }
  JointReturnLaw law(n, walk, conditioning, Backend::Exact);
  law.set_exact(std::move(cells));
  return law;
}

JointReturnLaw float_joint_law(int n, const StepDistribution& walk, Conditioning conditioning,
                               const JointLawOptions& options) {
  const OneDimEvent event = event_for(conditioning);
  const ScaledProfile prof1 = return_profiles(n, walk.tilde_p(1), event);
  const ScaledProfile prof2 = return_profiles(n, walk.tilde_p(2), event);
  const std::vector<double> binom = binomial_pmf(n, walk.h(1));

  int k_lo = 0;
  int k_hi = n;
  double remainder = 0.0;
  if (options.mode == ConvolutionMode::Windowed) {
    const BinomialWindow window = options.window ? *options.window : default_window(n, walk.h(1));
    if (window.n != n) fail(ErrorCode::WindowViolation, "window built for a different length");
    k_lo = window.k_low();
    k_hi = window.k_high();
    remainder += window.tail_bound;
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_weight(static_cast<std::size_t>(n) + 1, neg_inf);
  double top = neg_inf;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (binom[k] == 0.0 || prof1.values[k].empty() || prof2.values[n - k].empty()) continue;
    log_weight[k] = std::log(binom[k]) + prof1.log_scale[k] + prof2.log_scale[n - k];
    top = std::max(top, log_weight[k]);
  }
  // Binomial entries that underflowed carry less than 1e-320 each.
  remainder += 1e-300;
  remainder += prof1.pruned_mass_bound + prof2.pruned_mass_bound +
               prof1.pruned_mass_bound * prof2.pruned_mass_bound;

  struct Term {
    int k;
    double weight;
  };
  std::vector<Term> terms;
  int rows = 1;
  int cols = 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (log_weight[k] == neg_inf) continue;
    const double w = std::exp(log_weight[k] - top);
    const auto& a = prof1.values[k];
    const auto& b = prof2.values[n - k];
    if (w < kNegligibleWeight) {
      double sa = 0.0, sb = 0.0;
      for (double v : a) sa += v;
      for (double v : b) sb += v;
      remainder += std::exp(log_weight[k]) * sa * sb;
      continue;
    }
    terms.push_back({k, w});
    rows = std::max(rows, static_cast<int>(a.size()));
    cols = std::max(cols, static_cast<int>(b.size()));
  }

  Grid<double> scaled(rows, cols, 0.0);
  const unsigned threads = std::min<unsigned>(resolve_threads(options.config), static_cast<unsigned>(rows));
  // Each worker owns a fixed set of rows and sums over k in increasing order,
  // so the result does not depend on the number of workers.
  auto work = [&](unsigned lane) {
    for (const Term& t : terms) {
      const auto& a = prof1.values[t.k];
      const auto& b = prof2.values[n - t.k];
      for (std::size_t r1 = lane; r1 < a.size(); r1 += threads) {
        const double left = t.weight * a[r1];
        if (left == 0.0) continue;
        double* row = &scaled(static_cast<int>(r1), 0);
        for (std::size_t r2 = 0; r2 < b.size(); ++r2) row[r2] += left * b[r2];
      }
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned lane = 0; lane < threads; ++lane) pool.emplace_back(work, lane);
    for (auto& t : pool) t.join();
  }

  JointReturnLaw law(n, walk, conditioning, Backend::Float);
  law.set_float(std::move(scaled), top == neg_inf ? 0.0 : top, remainder);
  return law;
}

// Integer weights of surviving paths of every length 0..n.
std::vector<BigInt> survival_weights(int n, const BigInt& up, const BigInt& down) {
  std::vector<BigInt> out(static_cast<std::size_t>(n) + 1);
  std::vector<BigInt> v(static_cast<std::size_t>(n) + 2, 0), w(v.size(), 0);
  v[0] = 1;
  out[0] = 1;
  for (int k = 1; k <= n; ++k) {
    BigInt total = 0;
    for (int x = 0; x <= k; ++x) {
      w[x] = v[x + 1] * down;
      if (x >= 1) w[x] += v[x - 1] * up;
      total += w[x];
    }
    std::swap(v, w);
    out[k] = total;
  }
  return out;
}

}  // namespace

int BinomialWindow::k_low() const {
  return std::max(0, static_cast<int>(std::ceil(alpha * n - 1e-9)));
}

int BinomialWindow::k_high() const {
  return std::min(n, static_cast<int>(std::floor(beta * n + 1e-9)));
}

BinomialWindow make_window(int n, double h, double alpha, double beta) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  if (!(alpha >= 0.0 && alpha < h && h < beta && beta <= 1.0)) {
    fail(ErrorCode::WindowViolation, "need 0 <= alpha < h < beta <= 1");
  }
  BinomialWindow w;
  w.n = n;
  w.h = h;
  w.alpha = alpha;
  w.beta = beta;
  const double lower_rate = alpha > 0.0 ? kl_bernoulli(alpha, h) : std::numeric_limits<double>::infinity();
  const double upper_rate = beta < 1.0 ? kl_bernoulli(beta, h) : std::numeric_limits<double>::infinity();
  w.nu = std::exp(-std::min(lower_rate, upper_rate));
  const double bound = std::exp(-n * lower_rate) + std::exp(-n * upper_rate);
  w.tail_bound = std::min(1.0, bound);
  return w;
}

BinomialWindow default_window(int n, double h) {
  return make_window(n, h, h / 2.0, (1.0 + h) / 2.0);
}

JointReturnLaw::JointReturnLaw(int n, StepDistribution walk, Conditioning conditioning, Backend backend)
    : n_(n), walk_(std::move(walk)), conditioning_(conditioning), backend_(backend) {}

void JointReturnLaw::set_float(Grid<double> scaled, double log_scale, double remainder) {
  scaled_ = std::move(scaled);
  log_scale_ = log_scale;
  remainder_ = remainder;
  scaled_total_ = 0.0;
  for (double v : scaled_.data()) scaled_total_ += v;
  exact_.reset();
}

void JointReturnLaw::set_exact(Grid<Rational> cells) {
  exact_total_ = 0;
  for (const Rational& v : cells.data()) exact_total_ += v;
  Grid<double> scaled(cells.rows(), cells.cols(), 0.0);
  for (int r1 = 0; r1 < cells.rows(); ++r1)
    for (int r2 = 0; r2 < cells.cols(); ++r2) scaled(r1, r2) = cells(r1, r2).get_d();
  scaled_ = std::move(scaled);
  log_scale_ = 0.0;
  scaled_total_ = exact_total_.get_d();
  remainder_ = 0.0;
  exact_ = std::move(cells);
}

double JointReturnLaw::joint(int r1, int r2) const {
  if (!scaled_.contains(r1, r2)) return 0.0;
  return scaled_(r1, r2) * std::exp(log_scale_);
}

double JointReturnLaw::conditional(int r1, int r2) const {
  if (!scaled_.contains(r1, r2) || scaled_total_ == 0.0) return 0.0;
  if (exact_) {
    return exact_total_ == 0 ? 0.0 : Rational((*exact_)(r1, r2) / exact_total_).get_d();
  }
  return scaled_(r1, r2) / scaled_total_;
}

double JointReturnLaw::event_probability() const { return scaled_total_ * std::exp(log_scale_); }

double JointReturnLaw::log_event_probability() const {
  return std::log(scaled_total_) + log_scale_;
}

Rational JointReturnLaw::exact_joint(int r1, int r2) const {
  if (!exact_) fail(ErrorCode::InvalidArgument, "law was computed with the float backend");
  if (!exact_->contains(r1, r2)) return Rational(0);
  return (*exact_)(r1, r2);
}

Rational JointReturnLaw::exact_conditional(int r1, int r2) const {
  const Rational cell = exact_joint(r1, r2);
  if (exact_total_ == 0) fail(ErrorCode::BudgetExhausted, "conditioning event has probability zero");
  Rational out = cell / exact_total_;
  out.canonicalize();
  return out;
}

Rational JointReturnLaw::exact_event_probability() const {
  if (!exact_) fail(ErrorCode::InvalidArgument, "law was computed with the float backend");
  return exact_total_;
}

double JointReturnLaw::conditional_remainder() const {
  if (remainder_ == 0.0) return 0.0;
  const double event = event_probability();
  return event > 0.0 ? remainder_ / event : std::numeric_limits<double>::infinity();
}

std::vector<double> JointReturnLaw::conditional_marginal(int axis) const {
  if (axis != 1 && axis != 2) fail(ErrorCode::InvalidArgument, "axis must be 1 or 2");
  std::vector<double> out(static_cast<std::size_t>(axis == 1 ? rows() : cols()), 0.0);
  if (exact_) {
    std::vector<Rational> acc(out.size(), Rational(0));
    for (int r1 = 0; r1 < rows(); ++r1)
      for (int r2 = 0; r2 < cols(); ++r2) acc[axis == 1 ? r1 : r2] += (*exact_)(r1, r2);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = exact_total_ == 0 ? 0.0 : Rational(acc[i] / exact_total_).get_d();
    }
    return out;
  }
  for (int r1 = 0; r1 < rows(); ++r1)
    for (int r2 = 0; r2 < cols(); ++r2) out[axis == 1 ? r1 : r2] += scaled_(r1, r2);
  for (double& v : out) v /= scaled_total_;
  return out;
}

Grid<double> JointReturnLaw::conditional_table() const {
  Grid<double> out(rows(), cols(), 0.0);
  for (int r1 = 0; r1 < rows(); ++r1)
    for (int r2 = 0; r2 < cols(); ++r2) out(r1, r2) = conditional(r1, r2);
  return out;
}

JointReturnLaw joint_law(int n, const StepDistribution& walk, Conditioning conditioning,
                         const JointLawOptions& options) {
  check_length(conditioning, n);
  Backend backend = options.backend ? *options.backend : select_backend(walk, n, options.config);
  if (options.mode == ConvolutionMode::Windowed) backend = Backend::Float;
  if (backend == Backend::Exact) {
    if (!walk.is_exact()) fail(ErrorCode::InvalidArgument, "rational backend needs exact inputs");
    if (n > kMaxExactTableLength) {
      fail(ErrorCode::CapacityExceeded, "length " + std::to_string(n) +
                                            " exceeds the rational backend bound " +
                                            std::to_string(kMaxExactTableLength));
    }
    return exact_joint_law(n, walk, conditioning);
  }
  return float_joint_law(n, walk, conditioning, options);
}

double log_exit_probability(int n, const StepDistribution& walk) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  const std::vector<double> s1 = log_survival_sequence(n, walk.tilde_p(1));
  const std::vector<double> s2 = log_survival_sequence(n, walk.tilde_p(2));
  const std::vector<double> binom = binomial_pmf(n, walk.h(1));
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(static_cast<std::size_t>(n) + 1, neg_inf);
  double top = neg_inf;
  for (int k = 0; k <= n; ++k) {
    if (binom[k] == 0.0) continue;
    terms[k] = std::log(binom[k]) + s1[k] + s2[n - k];
    top = std::max(top, terms[k]);
  }
  double sum = 0.0;
  for (double t : terms)
    if (t != neg_inf) sum += std::exp(t - top);
  return top + std::log(sum);
}

double exit_probability(int n, const StepDistribution& walk) {
  return std::exp(log_exit_probability(n, walk));
}

Rational exact_exit_probability(int n, const StepDistribution& walk) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  const BigInt den = walk.common_denominator();
  const auto w1 = survival_weights(n, to_integer(walk.exact_p(1) * den), to_integer(walk.exact_q(1) * den));
  const auto w2 = survival_weights(n, to_integer(walk.exact_p(2) * den), to_integer(walk.exact_q(2) * den));
  BigInt total = 0;
  for (int k = 0; k <= n; ++k) {
    total += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)) * w1[k] * w2[n - k];
  }
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
  Rational out(total, scale);
  out.canonicalize();
  return out;
}

double bernstein_sum(const std::function<double(double)>& f, double h, int a, int b, int n,
                     double alpha, double beta) {
  if (a < 1 || b < 0) fail(ErrorCode::InvalidArgument, "need a >= 1 and b >= 0");
  if (n < 1) fail(ErrorCode::InvalidArgument, "need n >= 1");
  if (!(alpha >= 0.0 && alpha < h && h < beta && beta <= 1.0)) {
    fail(ErrorCode::WindowViolation, "need 0 <= alpha < h < beta <= 1");
  }
  const std::vector<double> binom = binomial_pmf(n, h);
  const int k_lo = std::max(0, static_cast<int>(std::ceil(alpha * n - 1e-9)));
  const int k_hi = std::min(n, static_cast<int>(std::floor(beta * n + 1e-9)));
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (((k - b) % a + a) % a != 0 || binom[k] == 0.0) continue;
    sum += f(static_cast<double>(k) / n) * binom[k];
  }
  return sum;
}

}  // namespace qwalk
