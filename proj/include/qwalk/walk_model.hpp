#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qwalk/rational.hpp"

namespace qwalk {

enum class Drift { Negative, Zero, Positive };

enum class Conditioning { Unconditioned, Bridge, Meander, NonNegativeBridge };

enum class Parity { Even, Odd };

enum class Backend { Exact, Float };

const char* to_string(Drift drift);
const char* to_string(Conditioning conditioning);
const char* to_string(Parity parity);
const char* to_string(Backend backend);

Conditioning parse_conditioning(std::string_view text);
Parity parse_parity(std::string_view text);

inline Parity parity_of(long n) { return (n % 2 == 0) ? Parity::Even : Parity::Odd; }

// Bridge-type conditionings need an even length: an odd walk cannot end at
// the origin with these steps.
bool requires_even_length(Conditioning conditioning);
bool involves_survival(Conditioning conditioning);
bool involves_endpoint(Conditioning conditioning);

// Throws ParityViolation for an odd length under a bridge-type conditioning.
void check_length(Conditioning conditioning, long n);

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kZeroDriftTolerance = 1e-15;

// Parameters of the walk obtained by keeping only the steps along one axis.
struct ExtractedParams {
  double tilde_p;
  double tilde_q;
  double h;
};

// Step law of the nearest-neighbour walk on Z^2: p_i is the probability of a
// +1 move along axis i, q_i of a -1 move. Axes are numbered 1 and 2.
class StepDistribution {
 public:
  // Float inputs: must be positive and sum to one within kSumTolerance; the
  // stored values are renormalised to sum to one.
  static StepDistribution validate(double p1, double q1, double p2, double q2);
  // Exact inputs: must be positive and sum to exactly one.
  static StepDistribution validate(const Rational& p1, const Rational& q1,
                                   const Rational& p2, const Rational& q2);
  // Decimal ("0.25") or rational ("1/4") strings, kept exact.
  static StepDistribution parse(std::string_view p1, std::string_view q1,
                                std::string_view p2, std::string_view q2);
  // "p1,q1,p2,q2".
  static StepDistribution parse(std::string_view comma_separated);

  double p(int axis) const { return p_[index(axis)]; }
  double q(int axis) const { return q_[index(axis)]; }
  double h(int axis) const { return p(axis) + q(axis); }
  double tilde_p(int axis) const { return p(axis) / h(axis); }
  double tilde_q(int axis) const { return q(axis) / h(axis); }
  Drift drift(int axis) const { return drift_[index(axis)]; }
  ExtractedParams extracted(int axis) const;

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact_p(int axis) const;
  const Rational& exact_q(int axis) const;
  Rational exact_h(int axis) const { return exact_p(axis) + exact_q(axis); }
  Rational exact_tilde_p(int axis) const { return exact_p(axis) / exact_h(axis); }
  // Least common denominator of the four exact probabilities.
  BigInt common_denominator() const;

  // (p1,q1) and (p2,q2) exchanged.
  StepDistribution swapped_axes() const;

  bool symmetric() const;
  std::string describe() const;

 private:
  struct ExactValues {
    std::array<Rational, 2> p;
    std::array<Rational, 2> q;
  };

  StepDistribution() = default;
  static std::size_t index(int axis);
  void classify();

  std::array<double, 2> p_{};
  std::array<double, 2> q_{};
  std::array<Drift, 2> drift_{};
  std::optional<ExactValues> exact_;
};

inline ExtractedParams extracted_params(const StepDistribution& walk, int axis) {
  return walk.extracted(axis);
}

// Cramer tilt of a 1D simple walk with up-probability p.
struct TiltParams {
  double rho;         // sqrt(4pq), the minimum of the Laplace transform
  double tilt_point;  // t0 = ln(q/p) / 2
  bool symmetric;
};

TiltParams tilt_params(double p);

// Factor f with P_p(A, S_n = x) = f * P_{1/2}(A, S_n = x) for any path event A:
// f = (4pq)^{n/2} (p/q)^{x/2}. Throws ParityMismatch unless x = n (mod 2) and
// |x| <= n.
double tilt_factor(double p, long n, long x);
double log_tilt_factor(double p, long n, long x);

struct EngineConfig {
  // Largest n handled by the rational backend when inputs are exact.
  int rational_bound = 128;
  // Worker threads for the convolution and sampling loops; 0 reads
  // QWALK_THREADS and falls back to 1.
  unsigned threads = 0;
};

unsigned resolve_threads(const EngineConfig& config);

Backend select_backend(const StepDistribution& walk, long n, const EngineConfig& config);

}  // namespace qwalk
