#include "qwalk/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qwalk/error.hpp"

namespace qwalk {

bool CheckLine::pass() const {
  if (bound == Bound::AtMost) return measured + slack <= threshold;
  return measured - slack > threshold;
}

double CheckLine::margin() const {
  if (bound == Bound::AtMost) return measured > 0.0 ? threshold / measured : INFINITY;
  return measured / threshold;
}

std::string format_check(const CheckLine& line) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s  %s  %s=%.6g (slack %.2g)  %s %.6g  margin %.2fx  %.2fs",
                line.pass() ? "PASS" : "FAIL", line.label.c_str(), line.metric.c_str(), line.measured,
                line.slack, line.bound == Bound::AtMost ? "<=" : ">", line.threshold, line.margin(),
                line.seconds);
  return buf;
}

bool Report::passed() const {
  for (const auto& line : lines)
    if (!line.pass()) return false;
  return !lines.empty();
}

Scale parse_scale(std::string_view text) {
  if (text == "small") return Scale::Small;
  if (text == "default") return Scale::Default;
  fail(ErrorCode::ParseError, "scale must be small or default");
}

const char* to_string(Scale scale) { return scale == Scale::Small ? "small" : "default"; }

namespace {

template <class Fn>
CheckLine timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckLine line = fn();
  line.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return line;
}

std::string label(const char* what, int n, const StepDistribution& walk) {
  return std::string(what) + " n=" + std::to_string(n) + " walk=" + walk.describe();
}

CheckLine from_row(const ConvergenceRow& row, std::string text) {
  return {std::move(text), to_string(row.kind), row.distance.value, row.distance.slack, kDistanceThreshold};
}

}  // namespace

CheckLine check_halfnormal(int n, const StepDistribution& walk) {
  return timed([&] {
    return from_row(compare_to_limit(n, walk, Conditioning::Unconditioned),
                    label("unconditioned vs half-normal", n, walk));
  });
}

CheckLine check_geometric_marginal(int n, const StepDistribution& walk) {
  return timed([&] {
    const DiscreteLaw law = DiscreteLaw::from_joint(joint_law(n, walk, Conditioning::Unconditioned));
    const Marginal limit = limit_joint(walk, Conditioning::Unconditioned, parity_of(n)).marginal(1);
    const Distance d = tv_distance(DiscreteLaw::from_vector(law.marginal(1), law.tail_bound),
                                   DiscreteLaw::from_marginal(limit));
    return CheckLine{label("unconditioned N1 vs geometric", n, walk), "TV", d.value, d.slack, kDistanceThreshold};
  });
}

CheckLine check_rayleigh(int n, const StepDistribution& walk) {
  return timed([&] {
    return from_row(compare_to_limit(n, walk, Conditioning::Bridge), label("bridge vs Rayleigh", n, walk));
  });
}

CheckLine check_bridge_independence(int n, const StepDistribution& walk) {
  return timed([&] {
    const Distance d = independence_gap(DiscreteLaw::from_joint(joint_law(n, walk, Conditioning::Bridge)));
    return CheckLine{label("bridge joint vs product of marginals", n, walk), "TV", d.value, d.slack,
                     kIndependenceThreshold};
  });
}

CheckLine check_excursion(int n, const StepDistribution& walk) {
  return timed([&] {
    return from_row(compare_to_limit(n, walk, Conditioning::NonNegativeBridge),
                    label("excursion vs NB(2,1/2)^2", n, walk));
  });
}

CheckLine check_meander(int n, const StepDistribution& walk) {
  return timed([&] {
    const LimitLaw limit = limit_joint(walk, Conditioning::Meander, parity_of(n));
    return from_row(compare_to_limit(n, walk, Conditioning::Meander),
                    label(("meander vs " + limit.describe()).c_str(), n, walk));
  });
}

CheckLine check_mixture_witness(const StepDistribution& walk) {
  return timed([&] {
    const Distance d =
        independence_gap(DiscreteLaw::from_limit(limit_joint(walk, Conditioning::Meander, Parity::Even)));
    return CheckLine{"meander limit vs product of its marginals walk=" + walk.describe(), "TV", d.value,
                     d.slack, kWitnessFloor, Bound::Above};
  });
}

Report reproduce(std::string_view theorem, Scale scale, const std::optional<StepDistribution>& walk) {
  const bool small = scale == Scale::Small;
  const auto symmetric = StepDistribution::parse("1/4,1/4,1/4,1/4");
  const auto positive = StepDistribution::parse("0.3,0.1,0.4,0.2");
  const auto negative = StepDistribution::parse("0.1,0.3,0.2,0.4");
  const auto mixed = StepDistribution::parse("0.3,0.1,0.2,0.4");

  Report report{std::string(theorem), to_string(scale), {}};
  if (theorem == "1.1") {
    const int n = small ? 1000 : 2000;
    const int m = small ? 100 : 400;
    if (walk) {
      bool zero = walk->drift(1) == Drift::Zero || walk->drift(2) == Drift::Zero;
      report.lines.push_back(zero ? check_halfnormal(n, *walk) : check_geometric_marginal(m, *walk));
    } else {
      report.lines.push_back(check_halfnormal(n, symmetric));
      report.lines.push_back(check_geometric_marginal(m, positive));
    }
  } else if (theorem == "1.2") {
    const int n = small ? 1000 : 2000;
    const auto& w = walk ? *walk : symmetric;
    report.lines.push_back(check_rayleigh(n, w));
    report.lines.push_back(check_bridge_independence(n, w));
  } else if (theorem == "1.3") {
    const int n = small ? 200 : 600;
    if (walk) {
      report.lines.push_back(check_meander(n, *walk));
      if (walk->drift(1) == Drift::Negative && walk->drift(2) == Drift::Negative)
        report.lines.push_back(check_mixture_witness(*walk));
    } else {
      report.lines.push_back(check_meander(n, positive));
      report.lines.push_back(check_meander(n, mixed));
      report.lines.push_back(check_meander(n, negative));
      report.lines.push_back(check_mixture_witness(negative));
    }
  } else if (theorem == "1.4") {
    const int n = small ? 200 : 400;
    if (walk) {
      report.lines.push_back(check_excursion(n, *walk));
    } else {
      report.lines.push_back(check_excursion(n, symmetric));
      report.lines.push_back(check_excursion(n, negative));
    }
  } else {
    fail(ErrorCode::InvalidArgument, "unknown theorem '" + std::string(theorem) + "' (expected 1.1 to 1.4)");
  }
  return report;
}

std::string format_report(const Report& report) {
  std::ostringstream out;
  out << "theorem " << report.theorem << " scale " << report.scale << "\n";
  for (const auto& line : report.lines) out << format_check(line) << "\n";
  out << (report.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace qwalk
