#include "qwalk/walk_model.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

const char* to_string(Drift drift) {
  switch (drift) {
    case Drift::Negative: return "negative";
    case Drift::Zero: return "zero";
    case Drift::Positive: return "positive";
  }
  return "?";
}

const char* to_string(Conditioning conditioning) {
  switch (conditioning) {
    case Conditioning::Unconditioned: return "none";
    case Conditioning::Bridge: return "bridge";
    case Conditioning::Meander: return "meander";
    case Conditioning::NonNegativeBridge: return "excursion";
  }
  return "?";
}

const char* to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

const char* to_string(Backend backend) { return backend == Backend::Exact ? "rational" : "float"; }

Conditioning parse_conditioning(std::string_view text) {
  if (text == "none" || text == "unconditioned") return Conditioning::Unconditioned;
  if (text == "bridge") return Conditioning::Bridge;
  if (text == "meander") return Conditioning::Meander;
  if (text == "excursion" || text == "nnb" || text == "nonnegative-bridge") {
    return Conditioning::NonNegativeBridge;
  }
  fail(ErrorCode::ParseError, "unknown conditioning '" + std::string(text) + "'");
}

Parity parse_parity(std::string_view text) {
  if (text == "even") return Parity::Even;
  if (text == "odd") return Parity::Odd;
  fail(ErrorCode::ParseError, "unknown parity '" + std::string(text) + "'");
}

bool requires_even_length(Conditioning conditioning) {
  return conditioning == Conditioning::Bridge || conditioning == Conditioning::NonNegativeBridge;
}

bool involves_survival(Conditioning conditioning) {
  return conditioning == Conditioning::Meander || conditioning == Conditioning::NonNegativeBridge;
}

bool involves_endpoint(Conditioning conditioning) { return requires_even_length(conditioning); }

void check_length(Conditioning conditioning, long n) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length " + std::to_string(n));
  if (requires_even_length(conditioning) && n % 2 != 0) {
    fail(ErrorCode::ParityViolation, std::string(to_string(conditioning)) +
                                         " conditioning needs an even length, got n=" +
                                         std::to_string(n));
  }
}

std::size_t StepDistribution::index(int axis) {
  if (axis != 1 && axis != 2) fail(ErrorCode::InvalidArgument, "axis must be 1 or 2");
  return static_cast<std::size_t>(axis - 1);
}

void StepDistribution::classify() {
  for (std::size_t i = 0; i < 2; ++i) {
    if (exact_) {
      int c = cmp(exact_->p[i], exact_->q[i]);
      drift_[i] = c > 0 ? Drift::Positive : (c < 0 ? Drift::Negative : Drift::Zero);
    } else {
      double d = p_[i] - q_[i];
      drift_[i] = std::abs(d) <= kZeroDriftTolerance ? Drift::Zero
                                                     : (d > 0 ? Drift::Positive : Drift::Negative);
    }
  }
}

StepDistribution StepDistribution::validate(double p1, double q1, double p2, double q2) {
  const double raw[4] = {p1, q1, p2, q2};
  for (double v : raw) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      fail(ErrorCode::NonPositiveProbability, "step probabilities must be positive");
    }
  }
  const double sum = p1 + q1 + p2 + q2;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "step probabilities sum to " << sum;
    fail(ErrorCode::SumNotOne, msg.str());
  }
  StepDistribution out;
  out.p_ = {p1 / sum, p2 / sum};
  out.q_ = {q1 / sum, q2 / sum};
  out.classify();
  return out;
}

StepDistribution StepDistribution::validate(const Rational& p1, const Rational& q1,
                                            const Rational& p2, const Rational& q2) {
  for (const Rational* v : {&p1, &q1, &p2, &q2}) {
    if (sgn(*v) <= 0) fail(ErrorCode::NonPositiveProbability, "step probabilities must be positive");
  }
  Rational sum = p1 + q1 + p2 + q2;
  if (sum != 1) fail(ErrorCode::SumNotOne, "step probabilities sum to " + format_rational(sum));
  StepDistribution out;
  out.exact_ = ExactValues{{p1, p2}, {q1, q2}};
  out.p_ = {p1.get_d(), p2.get_d()};
  out.q_ = {q1.get_d(), q2.get_d()};
  out.classify();
  return out;
}

StepDistribution StepDistribution::parse(std::string_view p1, std::string_view q1,
                                         std::string_view p2, std::string_view q2) {
  return validate(parse_rational(p1), parse_rational(q1), parse_rational(p2), parse_rational(q2));
}

StepDistribution StepDistribution::parse(std::string_view comma_separated) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = comma_separated.find(',', start);
    parts.push_back(comma_separated.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 4) {
    fail(ErrorCode::ParseError, "walk needs four probabilities p1,q1,p2,q2, got '" +
                                    std::string(comma_separated) + "'");
  }
  return parse(parts[0], parts[1], parts[2], parts[3]);
}

ExtractedParams StepDistribution::extracted(int axis) const {
  return {tilde_p(axis), tilde_q(axis), h(axis)};
}

const Rational& StepDistribution::exact_p(int axis) const {
  if (!exact_) fail(ErrorCode::InvalidArgument, "walk has no exact representation");
  return exact_->p[index(axis)];
}

const Rational& StepDistribution::exact_q(int axis) const {
  if (!exact_) fail(ErrorCode::InvalidArgument, "walk has no exact representation");
  return exact_->q[index(axis)];
}

BigInt StepDistribution::common_denominator() const {
  BigInt d = 1;
  for (int axis : {1, 2}) {
    for (const Rational* v : {&exact_p(axis), &exact_q(axis)}) {
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v->get_den_mpz_t());
    }
  }
  return d;
}

StepDistribution StepDistribution::swapped_axes() const {
  StepDistribution out = *this;
  std::swap(out.p_[0], out.p_[1]);
  std::swap(out.q_[0], out.q_[1]);
  std::swap(out.drift_[0], out.drift_[1]);
  if (out.exact_) {
    std::swap(out.exact_->p[0], out.exact_->p[1]);
    std::swap(out.exact_->q[0], out.exact_->q[1]);
  }
  return out;
}

bool StepDistribution::symmetric() const {
  return drift_[0] == Drift::Zero && drift_[1] == Drift::Zero;
}

std::string StepDistribution::describe() const {
  std::ostringstream out;
  if (exact_) {
    out << format_rational(exact_->p[0]) << ',' << format_rational(exact_->q[0]) << ','
        << format_rational(exact_->p[1]) << ',' << format_rational(exact_->q[1]);
  } else {
    out << format_double(p_[0]) << ',' << format_double(q_[0]) << ',' << format_double(p_[1])
        << ',' << format_double(q_[1]);
  }
  return out.str();
}

TiltParams tilt_params(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0,1)");
  const double q = 1.0 - p;
  return {std::sqrt(4.0 * p * q), 0.5 * std::log(q / p), p == q};
}

double log_tilt_factor(double p, long n, long x) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0,1)");
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  if (((n - x) % 2 + 2) % 2 != 0 || std::labs(x) > n) {
    fail(ErrorCode::ParityMismatch, "endpoint " + std::to_string(x) +
                                        " unreachable in " + std::to_string(n) + " steps");
  }
  const double q = 1.0 - p;
  return 0.5 * static_cast<double>(n) * std::log(4.0 * p * q) +
         0.5 * static_cast<double>(x) * std::log(p / q);
}

double tilt_factor(double p, long n, long x) { return std::exp(log_tilt_factor(p, n, x)); }

unsigned resolve_threads(const EngineConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("QWALK_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

Backend select_backend(const StepDistribution& walk, long n, const EngineConfig& config) {
  return (walk.is_exact() && n <= config.rational_bound) ? Backend::Exact : Backend::Float;
}

}  // namespace qwalk
