#include "qwalk/mc_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "qwalk/error.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/philox.hpp"

namespace qwalk {

const char* to_string(SampleMethod method) {
  return method == SampleMethod::Rejection ? "rejection" : "tilted";
}

SampleMethod parse_sample_method(std::string_view text) {
  if (text == "rejection") return SampleMethod::Rejection;
  if (text == "tilted") return SampleMethod::Tilted;
  fail(ErrorCode::ParseError, "unknown sampling method '" + std::string(text) + "'");
}

double EmpiricalLaw::acceptance_rate() const {
  return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
}

double EmpiricalLaw::normalized(int r1, int r2) const {
  if (!weight.contains(r1, r2) || total_weight <= 0.0) return 0.0;
  return weight(r1, r2) / total_weight;
}

Grid<double> EmpiricalLaw::normalized_table() const {
  Grid<double> out(weight.rows(), weight.cols(), 0.0);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = normalized(i, j);
  return out;
}

double EmpiricalLaw::joint_estimate(int r1, int r2) const {
  if (!weight.contains(r1, r2) || attempted == 0) return 0.0;
  return weight(r1, r2) / static_cast<double>(attempted);
}

double EmpiricalLaw::joint_standard_error(int r1, int r2) const {
  if (!weight.contains(r1, r2) || attempted < 2) return 0.0;
  const double m = static_cast<double>(attempted);
  const double mean = weight(r1, r2) / m;
  const double var = std::max(0.0, weight_sq(r1, r2) / m - mean * mean);
  return std::sqrt(var / (m - 1.0));
}

namespace {

struct Outcome {
  int r1 = 0;
  int r2 = 0;
  double weight = 0.0;
  bool accepted = false;
};

// Cumulative thresholds on a 32-bit draw for the moves +x, -x, +y, -y.
struct StepSampler {
  std::array<std::uint64_t, 3> cut;

  explicit StepSampler(const std::array<double, 4>& probs) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      acc += probs[static_cast<std::size_t>(i)];
      cut[static_cast<std::size_t>(i)] =
          static_cast<std::uint64_t>(std::min(acc, 1.0) * 4294967296.0);
    }
  }

  int draw(std::uint32_t u) const {
    if (u < cut[0]) return 0;
    if (u < cut[1]) return 1;
    if (u < cut[2]) return 2;
    return 3;
  }
};

struct TrialRunner {
  int n;
  Conditioning conditioning;
  StepSampler steps;
  bool tilted;
  // Per-axis log tilt: log rho for each step, log sqrt(p/q) per unit displacement.
  std::array<double, 2> log_rho{0.0, 0.0};
  std::array<double, 2> log_ratio{0.0, 0.0};

  Outcome run(const Philox4x32& engine, std::uint64_t trial) const {
    TrialStream stream(engine, trial);
    const bool survival = involves_survival(conditioning);
    const bool endpoint = involves_endpoint(conditioning);
    long x = 0, y = 0;
    int k1 = 0;
    Outcome out;
    for (int t = 0; t < n; ++t) {
      switch (steps.draw(stream.next())) {
        case 0: ++x; ++k1; if (x == 0) ++out.r1; break;
        case 1: --x; ++k1; if (x == 0) ++out.r1; break;
        case 2: ++y; if (y == 0) ++out.r2; break;
        default: --y; if (y == 0) ++out.r2; break;
      }
      if (survival && (x < 0 || y < 0)) return out;
    }
    if (endpoint && (x != 0 || y != 0)) return out;
    out.accepted = true;
    out.weight = 1.0;
    if (tilted) {
      const int k2 = n - k1;
      out.weight = std::exp(k1 * log_rho[0] + x * log_ratio[0] + k2 * log_rho[1] + y * log_ratio[1]);
    }
    return out;
  }
};

constexpr std::uint64_t kChunk = 1u << 16;

}  // namespace

EmpiricalLaw sample(int n, const StepDistribution& walk, Conditioning conditioning, std::uint64_t seed,
                    std::uint64_t trials, const SampleOptions& options) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (n < 0) fail(ErrorCode::NegativeArgument, "n must be non-negative");
  check_length(conditioning, n);

  const bool tilted = options.method == SampleMethod::Tilted;
  std::array<double, 4> probs{walk.p(1), walk.q(1), walk.p(2), walk.q(2)};
  TrialRunner runner{n, conditioning, StepSampler(probs), tilted};
  if (tilted) {
    // Each extracted walk runs symmetric; H_n keeps its law.
    probs = {walk.h(1) / 2, walk.h(1) / 2, walk.h(2) / 2, walk.h(2) / 2};
    runner.steps = StepSampler(probs);
    for (int i : {1, 2}) {
      const double p = walk.tilde_p(i), q = walk.tilde_q(i);
      runner.log_rho[static_cast<std::size_t>(i - 1)] = 0.5 * std::log(4.0 * p * q);
      runner.log_ratio[static_cast<std::size_t>(i - 1)] = 0.5 * std::log(p / q);
    }
  }

  EmpiricalLaw law;
  law.n = n;
  law.conditioning = conditioning;
  law.method = options.method;
  law.seed = seed;
  law.attempted = trials;
  const int extent = n / 2 + 1;
  law.counts = Grid<std::uint64_t>(extent, extent, 0);
  law.weight = Grid<double>(extent, extent, 0.0);
  law.weight_sq = Grid<double>(extent, extent, 0.0);

  const Philox4x32 engine(seed);
  EngineConfig config;
  config.threads = options.lanes;
  const unsigned lanes = std::max(1u, resolve_threads(config));
  std::vector<Outcome> slots(static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, trials)));

  for (std::uint64_t start = 0; start < trials; start += kChunk) {
    const std::uint64_t count = std::min<std::uint64_t>(kChunk, trials - start);
    auto work = [&](unsigned lane) {
      for (std::uint64_t i = lane; i < count; i += lanes) slots[i] = runner.run(engine, start + i);
    };
    if (lanes == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned lane = 0; lane < lanes; ++lane) pool.emplace_back(work, lane);
      for (auto& t : pool) t.join();
    }
    // Aggregate in trial order so the sums do not depend on the lane count.
    for (std::uint64_t i = 0; i < count; ++i) {
      const Outcome& o = slots[i];
      if (!o.accepted) continue;
      ++law.accepted;
      ++law.counts(o.r1, o.r2);
      law.weight(o.r1, o.r2) += o.weight;
      law.weight_sq(o.r1, o.r2) += o.weight * o.weight;
      law.total_weight += o.weight;
    }
  }
  law.budget_exhausted = law.accepted == 0;
  return law;
}

namespace {

// log P(S_k = 0) for the extracted walk, k even; with excursion set, also
// requires the path to stay non-negative (Catalan count).
double log_endpoint_zero(int k, double p, bool excursion) {
  const int m = k / 2;
  double log_count = std::lgamma(k + 1.0) - 2.0 * std::lgamma(m + 1.0);
  if (excursion) log_count -= std::log(m + 1.0);
  return log_count + m * std::log(p * (1.0 - p));
}

double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -INFINITY;
  const double top = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

}  // namespace

double acceptance_forecast(int n, const StepDistribution& walk, Conditioning conditioning) {
  if (n <= 0 || conditioning == Conditioning::Unconditioned) return 1.0;
  if (conditioning == Conditioning::Meander) return std::min(1.0, tau_asymptote(walk, n));
  if (n % 2 != 0) return 0.0;
  const bool excursion = conditioning == Conditioning::NonNegativeBridge;
  const double h1 = walk.h(1);
  std::vector<double> terms;
  for (int k = 0; k <= n; k += 2) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    terms.push_back(log_binom + k * std::log(h1) + (n - k) * std::log1p(-h1) +
                    log_endpoint_zero(k, walk.tilde_p(1), excursion) +
                    log_endpoint_zero(n - k, walk.tilde_p(2), excursion));
  }
  return std::min(1.0, std::exp(log_sum_exp(terms)));
}

}  // namespace qwalk
