#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/rational.hpp"

namespace qwalk {

// Exact law of (N_k, 1{S_k = 0}, 1{tau > k}) for the simple walk on Z started
// at 0, where N_k counts the times 1 <= j <= k with S_j = 0 and tau is the first
// time the walk is negative.
template <class T>
class BasicOneDimTable {
 public:
  BasicOneDimTable(int length, const T& p)
      : length_(length), p_(p), cells_(static_cast<std::size_t>(length / 2 + 1) * 4, T(0)) {}

  int length() const { return length_; }
  int max_returns() const { return length_ / 2; }
  const T& p() const { return p_; }

  T& at(int r, bool zero, bool survived) { return cells_[slot(r, zero, survived)]; }
  const T& at(int r, bool zero, bool survived) const { return cells_[slot(r, zero, survived)]; }

  T total() const {
    T sum(0);
    for (const T& v : cells_) sum += v;
    return sum;
  }

  T returns_marginal(int r) const {
    T sum(0);
    for (bool z : {false, true})
      for (bool s : {false, true}) sum += at(r, z, s);
    return sum;
  }

  T endpoint_zero() const {
    T sum(0);
    for (int r = 0; r <= max_returns(); ++r) sum += at(r, true, false) + at(r, true, true);
    return sum;
  }

  T survival() const {
    T sum(0);
    for (int r = 0; r <= max_returns(); ++r) sum += at(r, false, true) + at(r, true, true);
    return sum;
  }

 private:
  std::size_t slot(int r, bool zero, bool survived) const {
    return static_cast<std::size_t>(r) * 4 + (zero ? 2 : 0) + (survived ? 1 : 0);
  }

  int length_;
  T p_;
  std::vector<T> cells_;
};

using OneDimTable = BasicOneDimTable<double>;
using ExactOneDimTable = BasicOneDimTable<Rational>;

// Largest lengths accepted by the forward DP, per backend.
inline constexpr int kMaxExactTableLength = 512;
inline constexpr int kMaxFloatTableLength = 1024;

OneDimTable joint_table(int k, double p);
ExactOneDimTable joint_table(int k, const Rational& p);

// Tables for every length 0..n from a single DP pass.
std::vector<OneDimTable> joint_tables_upto(int n, double p);
std::vector<ExactOneDimTable> joint_tables_upto(int n, const Rational& p);

// Symmetric walk: P(theta_r = n), the r-th return happening at time n.
// Zero when r > n/2; OutOfRange for odd n or r < 1.
Rational theta_pmf(int r, int n);
// Symmetric walk: P(theta_r = n, tau > n) = 2^{-r} P(theta_r = n).
Rational theta_survival_pmf(int r, int n);

// P(tau > k).
double survival(int k, double p);
Rational survival(int k, const Rational& p);

// Which 1D event a return profile is restricted to.
enum class OneDimEvent { Any, EndpointZero, Survival, SurvivalEndpointZero };

// M(k, r) = P(N_k = r, event) for every k in 0..n. Row k holds r = 0..size-1;
// entries past the row end are below the pruning threshold. The value is
// values[k][r] * exp(log_scale[k]).
struct ScaledProfile {
  std::vector<std::vector<double>> values;
  std::vector<double> log_scale;
  // Upper bound on the total mass dropped by pruning, for any single k.
  double pruned_mass_bound = 0.0;

  double mass(int k, int r) const;
};

// Float-backend profiles for lengths up to n, built from the first-return
// decomposition: P(N_k = r, ...) = sum_j P(theta_r = j, ...) * P(no return in
// the remaining k - j steps, ...).
ScaledProfile return_profiles(int n, double p, OneDimEvent event);

// Exact profiles as integer path weights: W(k, r) = sum over paths in the
// event of up^{#up steps} * down^{#down steps}. Dividing by (up + down)^k
// gives the probability for p = up / (up + down).
std::vector<std::vector<BigInt>> integer_profiles(int n, const BigInt& up, const BigInt& down,
                                                  OneDimEvent event);

// log P(tau > k) for k = 0..n, scaled DP so long drifted walks do not underflow.
std::vector<double> log_survival_sequence(int n, double p);

}  // namespace qwalk
