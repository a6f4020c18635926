#include "qwalk/oned_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

bool is_zero(double v) { return v == 0.0; }
bool is_zero(const BigInt& v) { return sgn(v) == 0; }

// Forward DP over (survival flag, returns so far, position). Survival-false
// states keep their position because the endpoint flag still needs it. When
// survival_only is set the s=false layer is never populated.
template <class T, class Emit>
void forward_dp(int n, const T& up, const T& down, bool survival_only, Emit&& emit) {
  const int width = 2 * n + 1;
  const int max_r = n / 2;
  const std::size_t layer = static_cast<std::size_t>(max_r + 1) * width;
  auto idx = [&](int s, int r, int x) {
    return static_cast<std::size_t>(s) * layer + static_cast<std::size_t>(r) * width + (x + n);
  };
  std::vector<T> cur(2 * layer, T(0));
  std::vector<T> next(2 * layer, T(0));
  cur[idx(1, 0, 0)] = T(1);
  emit(0, cur, idx);
  for (int k = 1; k <= n; ++k) {
    const int prev = k - 1;
    const int r_hi = std::min(max_r, prev / 2);
    const int r_next = std::min(max_r, k / 2);
    for (int s = 0; s < 2; ++s)
      for (int r = 0; r <= r_next; ++r)
        for (int x = -k; x <= k; x += 2) next[idx(s, r, x)] = T(0);
    for (int s = survival_only ? 1 : 0; s < 2; ++s) {
      for (int r = 0; r <= r_hi; ++r) {
        for (int x = -prev; x <= prev; x += 2) {
          const T& v = cur[idx(s, r, x)];
          if (is_zero(v)) continue;
          {
            const int x2 = x + 1;
            const int r2 = r + (x2 == 0 ? 1 : 0);
            next[idx(s, r2, x2)] += v * up;
          }
          {
            const int x2 = x - 1;
            const int r2 = r + (x2 == 0 ? 1 : 0);
            const int s2 = (s == 1 && x2 >= 0) ? 1 : 0;
            if (!(survival_only && s2 == 0)) next[idx(s2, r2, x2)] += v * down;
          }
        }
      }
    }
    std::swap(cur, next);
    emit(k, cur, idx);
  }
}

template <class T, class Idx>
void fill_table(int k, const std::vector<T>& state, const Idx& idx, BasicOneDimTable<T>& table) {
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r <= k / 2; ++r)
      for (int x = -k; x <= k; x += 2) {
        const T& v = state[idx(s, r, x)];
        if (!is_zero(v)) table.at(r, x == 0, s == 1) += v;
      }
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "p must lie in (0,1)");
}

void check_p(const Rational& p) {
  if (sgn(p) <= 0 || p >= 1) fail(ErrorCode::OutOfRange, "p must lie in (0,1)");
}

void check_length(int n, int cap) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  if (n > cap) {
    fail(ErrorCode::CapacityExceeded,
         "length " + std::to_string(n) + " exceeds backend bound " + std::to_string(cap));
  }
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::vector<OneDimTable> joint_tables_upto(int n, double p) {
  check_p(p);
  check_length(n, kMaxFloatTableLength);
  std::vector<OneDimTable> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  forward_dp<double>(n, p, 1.0 - p, false, [&](int k, const std::vector<double>& state, const auto& idx) {
    OneDimTable table(k, p);
    fill_table(k, state, idx, table);
    out.push_back(std::move(table));
  });
  return out;
}

std::vector<ExactOneDimTable> joint_tables_upto(int n, const Rational& p) {
  check_p(p);
  check_length(n, kMaxExactTableLength);
  const BigInt up = p.get_num();
  const BigInt den = p.get_den();
  const BigInt down = den - up;
  std::vector<ExactOneDimTable> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  BigInt scale = 1;
  forward_dp<BigInt>(n, up, down, false, [&](int k, const std::vector<BigInt>& state, const auto& idx) {
    BasicOneDimTable<BigInt> weights(k, BigInt(0));
    fill_table(k, state, idx, weights);
    ExactOneDimTable table(k, p);
    for (int r = 0; r <= k / 2; ++r)
      for (bool z : {false, true})
        for (bool s : {false, true}) {
          Rational& cell = table.at(r, z, s);
          cell = Rational(weights.at(r, z, s), scale);
          cell.canonicalize();
        }
    out.push_back(std::move(table));
    scale *= den;
  });
  return out;
}

OneDimTable joint_table(int k, double p) { return std::move(joint_tables_upto(k, p).back()); }

ExactOneDimTable joint_table(int k, const Rational& p) {
  return std::move(joint_tables_upto(k, p).back());
}

Rational theta_pmf(int r, int n) {
  if (n < 0 || n % 2 != 0) fail(ErrorCode::OutOfRange, "theta_pmf needs an even length");
  if (r < 1) fail(ErrorCode::OutOfRange, "theta_pmf needs r >= 1");
  if (r > n / 2) return Rational(0);
  const unsigned long steps = static_cast<unsigned long>(n - r);
  BigInt two_pow;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, steps);
  Rational out(BigInt(r) * binomial(steps, static_cast<unsigned long>(n / 2)),
               BigInt(n - r) * two_pow);
  out.canonicalize();
  return out;
}

Rational theta_survival_pmf(int r, int n) {
  Rational base = theta_pmf(r, n);
  mpz_mul_2exp(base.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(r));
  base.canonicalize();
  return base;
}

std::vector<double> log_survival_sequence(int n, double p) {
  check_p(p);
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  const double q = 1.0 - p;
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  // v holds the law of the surviving walk, renormalised to total one each step.
  std::vector<double> v(static_cast<std::size_t>(n) + 2, 0.0);
  std::vector<double> w(v.size(), 0.0);
  v[0] = 1.0;
  double log_mass = 0.0;
  for (int k = 1; k <= n; ++k) {
    double total = 0.0;
    for (int x = 0; x <= k; ++x) {
      double val = 0.0;
      if (x >= 1) val += p * v[x - 1];
      val += q * v[x + 1];
      w[x] = val;
      total += val;
    }
    log_mass += std::log(total);
    out[k] = log_mass;
    for (int x = 0; x <= k; ++x) v[x] = w[x] / total;
  }
  return out;
}

double survival(int k, double p) { return std::exp(log_survival_sequence(k, p).back()); }

Rational survival(int k, const Rational& p) {
  check_p(p);
  if (k < 0) fail(ErrorCode::InvalidArgument, "negative length");
  const BigInt up = p.get_num();
  const BigInt den = p.get_den();
  const BigInt down = den - up;
  std::vector<BigInt> v(static_cast<std::size_t>(k) + 2, 0), w(v.size(), 0);
  v[0] = 1;
  for (int step = 1; step <= k; ++step) {
    for (int x = 0; x <= step; ++x) {
      w[x] = v[x + 1] * down;
      if (x >= 1) w[x] += v[x - 1] * up;
    }
    std::swap(v, w);
  }
  BigInt total = 0;
  for (const BigInt& x : v) total += x;
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
  Rational out(total, scale);
  out.canonicalize();
  return out;
}

double ScaledProfile::mass(int k, int r) const {
  if (k < 0 || static_cast<std::size_t>(k) >= values.size()) return 0.0;
  const auto& row = values[k];
  if (r < 0 || static_cast<std::size_t>(r) >= row.size()) return 0.0;
  return row[r] * std::exp(log_scale[k]);
}

ScaledProfile return_profiles(int n, double p, OneDimEvent event) {
  check_p(p);
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  constexpr double kPrune = 1e-60;
  const double q = 1.0 - p;
  const double log_rho = 0.5 * std::log(4.0 * p * q);
  const int half = n / 2;

  // Symmetric-walk law of theta_r at even times j = 2m, fstar[m][r]; the
  // drifted law is (4pq)^{m} times this because S_j = 0.
  std::vector<std::vector<double>> fstar(static_cast<std::size_t>(half) + 1);
  fstar[0] = {1.0};
  double first_return = 0.5;
  for (int m = 1; m <= half; ++m) {
    if (m > 1) first_return *= static_cast<double>(2 * m - 3) / (2.0 * m);
    const int j = 2 * m;
    auto& row = fstar[m];
    row.assign(2, 0.0);
    row[1] = first_return;
    double value = first_return;
    for (int r = 1; r < m; ++r) {
      const double ratio = 2.0 * (r + 1) * (m - r) / (static_cast<double>(r) * (j - r - 1));
      value *= ratio;
      if (value < kPrune && ratio < 1.0) break;
      row.push_back(value);
    }
  }

  const bool survival_event = event == OneDimEvent::Survival || event == OneDimEvent::SurvivalEndpointZero;
  ScaledProfile out;
  out.values.resize(static_cast<std::size_t>(n) + 1);
  out.log_scale.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out.pruned_mass_bound = kPrune * (static_cast<double>(half) + 1.0) * (half + 1.0);

  auto apply_survival_factor = [&](std::vector<double>& row) {
    if (!survival_event) return;
    double factor = 1.0;
    for (double& v : row) {
      v *= factor;
      factor *= 0.5;
    }
  };

  if (event == OneDimEvent::EndpointZero || event == OneDimEvent::SurvivalEndpointZero) {
    for (int k = 0; k <= n; k += 2) {
      out.values[k] = fstar[k / 2];
      out.log_scale[k] = k * log_rho;
      apply_survival_factor(out.values[k]);
    }
    return out;
  }

  // log of the tail factor: probability of not returning during the last m
  // steps (Any), or of staying strictly positive during them (Survival).
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_tail(static_cast<std::size_t>(n) + 1, 0.0);
  if (n >= 1) {
    const std::vector<double> stay_up = log_survival_sequence(n - 1, p);
    std::vector<double> stay_down;
    if (event == OneDimEvent::Any) stay_down = log_survival_sequence(n - 1, q);
    for (int m = 1; m <= n; ++m) {
      double up_part = std::log(p) + stay_up[m - 1];
      double down_part = event == OneDimEvent::Any ? std::log(q) + stay_down[m - 1] : neg_inf;
      log_tail[m] = log_add(up_part, down_part);
    }
  }

  std::vector<double> weights;
  for (int k = 0; k <= n; ++k) {
    double top = neg_inf;
    for (int j = 0; j <= k; j += 2) top = std::max(top, j * log_rho + log_tail[k - j]);
    weights.assign(static_cast<std::size_t>(k / 2) + 1, 0.0);
    std::size_t width = 0;
    for (int j = 0; j <= k; j += 2) {
      weights[j / 2] = std::exp(j * log_rho + log_tail[k - j] - top);
      width = std::max(width, fstar[j / 2].size());
    }
    auto& row = out.values[k];
    row.assign(width, 0.0);
    for (int j = 0; j <= k; j += 2) {
      const double w = weights[j / 2];
      if (w == 0.0) continue;
      const auto& f = fstar[j / 2];
      for (std::size_t r = 0; r < f.size(); ++r) row[r] += w * f[r];
    }
    apply_survival_factor(row);
    out.log_scale[k] = top;
  }
  return out;
}

std::vector<std::vector<BigInt>> integer_profiles(int n, const BigInt& up, const BigInt& down,
                                                  OneDimEvent event) {
  check_length(n, kMaxExactTableLength);
  const bool survival_event = event == OneDimEvent::Survival || event == OneDimEvent::SurvivalEndpointZero;
  const bool endpoint_event = event == OneDimEvent::EndpointZero || event == OneDimEvent::SurvivalEndpointZero;
  std::vector<std::vector<BigInt>> out(static_cast<std::size_t>(n) + 1);
  forward_dp<BigInt>(n, up, down, survival_event,
                     [&](int k, const std::vector<BigInt>& state, const auto& idx) {
                       auto& row = out[k];
                       row.assign(static_cast<std::size_t>(k / 2) + 1, BigInt(0));
                       for (int s = survival_event ? 1 : 0; s < 2; ++s)
                         for (int r = 0; r <= k / 2; ++r)
                           for (int x = -k; x <= k; x += 2) {
                             if (endpoint_event && x != 0) continue;
                             const BigInt& v = state[idx(s, r, x)];
                             if (!is_zero(v)) row[r] += v;
                           }
                     });
  return out;
}

}  // namespace qwalk
