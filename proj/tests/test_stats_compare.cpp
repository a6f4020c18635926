#include <doctest.h>

#include <cmath>
#include <random>

#include "qwalk/error.hpp"
#include "qwalk/reproduce.hpp"
#include "qwalk/stats_compare.hpp"

using namespace qwalk;

namespace {

DiscreteLaw random_law(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DiscreteLaw law{Grid<double>(rows, cols, 0.0), 0.0};
  double total = 0.0;
  for (double& v : law.mass.data()) total += (v = u(rng) < 0.3 ? 0.0 : u(rng));
  for (double& v : law.mass.data()) v /= total;
  return law;
}

}  // namespace

TEST_CASE("total variation examples") {
  auto a = DiscreteLaw::from_vector({0.2, 0.5, 0.3});
  CHECK(tv_distance(a, a).value == 0.0);
  CHECK(tv_distance(DiscreteLaw::from_vector({1.0}), DiscreteLaw::from_vector({0.0, 1.0})).value == 1.0);
  // sum_r |1 - r| / 2^{r+1} = 1/2 + 1/2.
  const Distance d = tv_distance(DiscreteLaw::from_marginal(Geometric{0.5}), DiscreteLaw::from_marginal(NegBinomial2Half{}));
  CHECK(d.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.slack <= 1e-12);
}

TEST_CASE("total variation is a metric on random laws") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_law(rng, size(rng), size(rng));
    auto b = random_law(rng, size(rng), size(rng));
    auto c = random_law(rng, size(rng), size(rng));
    const double ab = tv_distance(a, b).value, ba = tv_distance(b, a).value;
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab <= tv_distance(a, c).value + tv_distance(c, b).value + 1e-12);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("KS against a discretised continuous law") {
  // pmf of floor(scale * X) for half-normal X: KS at the jump points is the
  // gap between cdf((r+1)/scale) and cdf(r/scale), at most one cell.
  const double scale = 1e4;
  std::vector<double> pmf;
  for (int r = 0; r < 80000; ++r) pmf.push_back(halfnormal_cdf((r + 1) / scale) - halfnormal_cdf(r / scale));
  CHECK(ks_rescaled(pmf, scale, halfnormal_cdf).value <= 1e-4);
  CHECK_THROWS_AS(ks_rescaled(pmf, 0.0, halfnormal_cdf), Error);
}

TEST_CASE("exact laws at n = 2000 against continuous limits") {
  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  for (Conditioning c : {Conditioning::Unconditioned, Conditioning::Bridge}) {
    auto row = compare_to_limit(2000, sym, c);
    CHECK(row.kind == DistanceKind::KS);
    CHECK(row.rescale[0] == doctest::Approx(std::sqrt(1000.0)));
    CHECK(row.distance.upper() <= 0.05);
  }
}

TEST_CASE("sweeps") {
  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  auto rows = sweep({100, 400, 1600}, sym, Conditioning::NonNegativeBridge);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(row.kind == DistanceKind::TV);
  CHECK(rows.back().distance.upper() <= 0.05);

  auto neg = StepDistribution::parse("0.1,0.3,0.2,0.4");
  auto meander = sweep({200, 600}, neg, Conditioning::Meander);
  REQUIRE(meander.size() == 2);
  CHECK(meander.back().parity == Parity::Even);
  CHECK(meander.back().distance.upper() <= 0.05);

  CHECK(sweep({}, sym, Conditioning::Bridge).empty());
  CHECK_THROWS_AS(sweep({400, 100}, sym, Conditioning::Bridge), Error);
  CHECK_THROWS_AS(sweep({101}, sym, Conditioning::Bridge), Error);
}

TEST_CASE("independence detector") {
  auto neg = StepDistribution::parse("0.1,0.3,0.2,0.4");
  const Distance mixture = independence_gap(DiscreteLaw::from_limit(limit_joint(neg, Conditioning::Meander, Parity::Even)));
  CHECK(mixture.value - mixture.slack > 0.0);
  CHECK(mixture.value == doctest::Approx(0.0017183938466).epsilon(1e-9));

  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  const Distance product =
      independence_gap(DiscreteLaw::from_limit(limit_joint(sym, Conditioning::NonNegativeBridge, Parity::Even)));
  CHECK(product.value <= product.slack + 1e-15);
}

TEST_CASE("reproduce drivers") {
  auto report = reproduce("1.4", Scale::Small);
  CHECK(report.passed());
  CHECK(report.lines.size() == 2);
  auto mixture = reproduce("1.3", Scale::Small, StepDistribution::parse("0.1,0.3,0.2,0.4"));
  CHECK(mixture.passed());
  CHECK(mixture.lines.size() == 2);
  CHECK_THROWS_AS(reproduce("9.9", Scale::Small), Error);
}
