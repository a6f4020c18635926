#include "qwalk/stats_compare.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

DiscreteLaw DiscreteLaw::from_vector(const std::vector<double>& pmf, double tail_bound) {
  DiscreteLaw out{Grid<double>(static_cast<int>(pmf.size()), 1, 0.0), tail_bound};
  for (std::size_t r = 0; r < pmf.size(); ++r) out.mass(static_cast<int>(r), 0) = pmf[r];
  return out;
}

DiscreteLaw DiscreteLaw::from_limit(const LimitLaw& law, double tail) {
  auto table = law.tabulate(tail);
  return {std::move(table.mass), table.tail_bound};
}

DiscreteLaw DiscreteLaw::from_marginal(const Marginal& m, double tail) {
  const int top = support_bound(m, tail);
  std::vector<double> pmf(static_cast<std::size_t>(top + 1));
  for (int r = 0; r <= top; ++r) pmf[static_cast<std::size_t>(r)] = marginal_pmf(m, r);
  return from_vector(pmf, marginal_tail(m, top));
}

DiscreteLaw DiscreteLaw::from_joint(const JointReturnLaw& law) {
  return {law.conditional_table(), law.conditional_remainder()};
}

double DiscreteLaw::total() const {
  double s = 0.0;
  for (double v : mass.data()) s += v;
  return s;
}

std::vector<double> DiscreteLaw::marginal(int axis) const {
  if (axis != 1 && axis != 2) fail(ErrorCode::OutOfRange, "axis must be 1 or 2");
  std::vector<double> out(static_cast<std::size_t>(axis == 1 ? mass.rows() : mass.cols()), 0.0);
  for (int i = 0; i < mass.rows(); ++i)
    for (int j = 0; j < mass.cols(); ++j) out[static_cast<std::size_t>(axis == 1 ? i : j)] += mass(i, j);
  return out;
}

Distance tv_distance(const DiscreteLaw& a, const DiscreteLaw& b) {
  const int rows = std::max(a.mass.rows(), b.mass.rows());
  const int cols = std::max(a.mass.cols(), b.mass.cols());
  double sum = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double x = a.mass.contains(i, j) ? a.mass(i, j) : 0.0;
      const double y = b.mass.contains(i, j) ? b.mass(i, j) : 0.0;
      sum += std::abs(x - y);
    }
  }
  return {std::min(1.0, 0.5 * sum), 0.5 * (a.tail_bound + b.tail_bound)};
}

Distance ks_rescaled(const std::vector<double>& pmf, double scale, const std::function<double(double)>& limit_cdf,
                     double tail_bound) {
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be positive");
  double cumulative = 0.0;
  double sup = 0.0;
  for (std::size_t r = 0; r < pmf.size(); ++r) {
    cumulative += pmf[r];
    sup = std::max(sup, std::abs(cumulative - limit_cdf(static_cast<double>(r) / scale)));
  }
  return {std::min(1.0, sup), tail_bound};
}

Distance independence_gap(const DiscreteLaw& law) {
  const auto m1 = law.marginal(1);
  const auto m2 = law.marginal(2);
  DiscreteLaw product{Grid<double>(law.mass.rows(), law.mass.cols(), 0.0), 0.0};
  for (int i = 0; i < law.mass.rows(); ++i)
    for (int j = 0; j < law.mass.cols(); ++j)
      product.mass(i, j) = m1[static_cast<std::size_t>(i)] * m2[static_cast<std::size_t>(j)];
  // Truncated marginals shift the product by at most 2T inside the box; outside
  // it the law has at most T and the true product at most 2T.
  Distance d = tv_distance(law, product);
  d.slack = 2.5 * law.tail_bound;
  return d;
}

const char* to_string(DistanceKind kind) { return kind == DistanceKind::TV ? "TV" : "KS"; }

namespace {

std::function<double(double)> continuous_cdf(const Marginal& m) {
  if (std::holds_alternative<HalfNormal>(m)) return halfnormal_cdf;
  if (std::holds_alternative<Rayleigh>(m)) return rayleigh_cdf;
  fail(ErrorCode::InvalidArgument, "marginal is not continuous");
}

}  // namespace

ConvergenceRow compare_to_limit(int n, const StepDistribution& walk, Conditioning conditioning,
                                const SweepOptions& options) {
  ConvergenceRow row;
  row.n = n;
  row.conditioning = conditioning;
  row.parity = options.parity.value_or(parity_of(n));
  row.rescale = rescale_factors(walk, conditioning, n);

  const JointReturnLaw exact = joint_law(n, walk, conditioning, options.engine);
  const DiscreteLaw law = DiscreteLaw::from_joint(exact);
  const LimitLaw limit = limit_joint(walk, conditioning, row.parity);

  if (limit.discrete()) {
    row.kind = DistanceKind::TV;
    row.distance = tv_distance(law, DiscreteLaw::from_limit(limit));
    return row;
  }
  row.kind = DistanceKind::KS;
  for (int axis : {1, 2}) {
    const Marginal& m = limit.marginal(axis);
    const auto pmf = law.marginal(axis);
    Distance d = is_discrete(m) ? tv_distance(DiscreteLaw::from_vector(pmf, law.tail_bound),
                                              DiscreteLaw::from_marginal(m))
                                : ks_rescaled(pmf, row.rescale[static_cast<std::size_t>(axis - 1)],
                                              continuous_cdf(m), law.tail_bound);
    row.distance.value = std::max(row.distance.value, d.value);
    row.distance.slack = std::max(row.distance.slack, d.slack);
  }
  return row;
}

std::vector<ConvergenceRow> sweep(const std::vector<int>& ns, const StepDistribution& walk,
                                  Conditioning conditioning, const SweepOptions& options) {
  if (!std::is_sorted(ns.begin(), ns.end())) fail(ErrorCode::InvalidArgument, "lengths must be ascending");
  for (int n : ns) check_length(conditioning, n);
  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) rows.push_back(compare_to_limit(n, walk, conditioning, options));
  return rows;
}

}  // namespace qwalk
