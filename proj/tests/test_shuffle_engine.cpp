#include <doctest.h>

#include <cmath>

#include "qwalk/brute_oracle.hpp"
#include "qwalk/error.hpp"
#include "qwalk/oned_engine.hpp"
#include "qwalk/shuffle_engine.hpp"

using namespace qwalk;

namespace {

const char* const kWalks[] = {"1/4,1/4,1/4,1/4", "0.1,0.3,0.2,0.4", "0.3,0.1,0.4,0.2"};
const Conditioning kConditionings[] = {Conditioning::Unconditioned, Conditioning::Bridge, Conditioning::Meander,
                                       Conditioning::NonNegativeBridge};

Rational cell(const JointReturnLaw& law, int i, int j) {
  return i < law.rows() && j < law.cols() ? law.exact_joint(i, j) : Rational(0);
}

double fcell(const JointReturnLaw& law, int i, int j) {
  return i < law.rows() && j < law.cols() ? law.joint(i, j) : 0.0;
}

}  // namespace

TEST_CASE("two-step symmetric law") {
  auto walk = StepDistribution::parse("1/4,1/4,1/4,1/4");
  auto law = joint_law(2, walk, Conditioning::Unconditioned);
  CHECK(law.exact_joint(1, 0) == Rational(1, 8));
  CHECK(law.exact_joint(0, 1) == Rational(1, 8));
  CHECK(law.exact_joint(0, 0) == Rational(3, 4));
  CHECK(exact_exit_probability(0, walk) == 1);
  CHECK(exact_exit_probability(2, walk) == Rational(3, 8));
}

TEST_CASE("exact engine equals the oracle for n up to 12") {
  for (const char* w : kWalks) {
    auto walk = StepDistribution::parse(w);
    for (int n = 0; n <= 12; ++n) {
      for (Conditioning c : kConditionings) {
        if (requires_even_length(c) && n % 2 != 0) continue;
        auto a = joint_law(n, walk, c);
        auto b = enumerate_joint(n, walk, c);
        REQUIRE(a.is_exact());
        const int rows = std::max(a.rows(), b.rows()), cols = std::max(a.cols(), b.cols());
        int mismatches = 0;
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j) mismatches += cell(a, i, j) != cell(b, i, j);
        CHECK_MESSAGE(mismatches == 0, w << " n=" << n << " " << to_string(c));
        CHECK(a.exact_event_probability() == b.exact_event_probability());
      }
    }
  }
}

TEST_CASE("float backend agrees with the exact one") {
  for (const char* w : kWalks) {
    auto walk = StepDistribution::parse(w);
    for (int n : {7, 16, 40}) {
      for (Conditioning c : kConditionings) {
        if (requires_even_length(c) && n % 2 != 0) continue;
        JointLawOptions options;
        options.backend = Backend::Float;
        auto f = joint_law(n, walk, c, options);
        auto e = joint_law(n, walk, c);
        CHECK(f.event_probability() == doctest::Approx(e.exact_event_probability().get_d()).epsilon(1e-12));
        for (int i = 0; i < e.rows(); ++i)
          for (int j = 0; j < e.cols(); ++j)
            CHECK(std::abs(fcell(f, i, j) - e.exact_joint(i, j).get_d()) <= 1e-14);
      }
    }
  }
}

TEST_CASE("swapping the axes transposes the table") {
  for (const char* w : {"0.1,0.3,0.2,0.4", "1/8,1/4,3/8,1/4"}) {
    auto walk = StepDistribution::parse(w);
    for (Conditioning c : kConditionings) {
      auto a = joint_law(10, walk, c);
      auto b = joint_law(10, walk.swapped_axes(), c);
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) CHECK(a.exact_joint(i, j) == cell(b, j, i));
    }
  }
}

TEST_CASE("windowed cells stay within the remainder of the exact ones") {
  auto walk = StepDistribution::parse("0.1,0.3,0.2,0.4");
  for (int n : {60, 200, 512}) {
    for (Conditioning c : {Conditioning::Unconditioned, Conditioning::Bridge}) {
      JointLawOptions windowed;
      windowed.mode = ConvolutionMode::Windowed;
      auto w = joint_law(n, walk, c, windowed);
      JointLawOptions full;
      full.backend = Backend::Float;
      auto e = joint_law(n, walk, c, full);
      CHECK(w.truncation_remainder() > 0.0);
      for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j)
          CHECK(std::abs(fcell(w, i, j) - e.joint(i, j)) <= w.truncation_remainder() + 1e-15);
    }
  }
}

TEST_CASE("unconditioned first marginal is a binomial mixture of 1D laws") {
  auto walk = StepDistribution::parse("0.1,0.3,0.2,0.4");
  const int n = 14;
  auto law = joint_law(n, walk, Conditioning::Unconditioned);
  auto tables = joint_tables_upto(n, walk.exact_tilde_p(1));
  const Rational h1 = walk.exact_h(1);
  for (int r = 0; r < law.rows(); ++r) {
    Rational marginal = 0;
    for (int j = 0; j < law.cols(); ++j) marginal += law.exact_joint(r, j);
    Rational mixture = 0;
    for (int k = 0; k <= n; ++k) {
      const auto& t = tables[static_cast<std::size_t>(k)];
      if (r > t.max_returns()) continue;
      mixture += Rational(binomial(n, static_cast<unsigned long>(k))) * pow(h1, static_cast<unsigned long>(k)) *
                 pow(1 - h1, static_cast<unsigned long>(n - k)) * t.returns_marginal(r);
    }
    CHECK(marginal == mixture);
  }
}

TEST_CASE("exit probability") {
  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  const double v = exit_probability(2000, sym);
  const double kappa2 = 2.0 / M_PI;
  CHECK(std::abs(v * 2000 * 0.5 / kappa2 - 1.0) <= 0.03);
  CHECK(exit_probability(12, sym) == doctest::Approx(exact_exit_probability(12, sym).get_d()).epsilon(1e-13));
  auto neg = StepDistribution::parse("0.1,0.3,0.2,0.4");
  CHECK(exit_probability(30, neg) == doctest::Approx(exact_exit_probability(30, neg).get_d()).epsilon(1e-12));
  CHECK(std::isfinite(log_exit_probability(20000, neg)));
}

TEST_CASE("binomial window bounds") {
  auto w = default_window(1000, 0.4);
  CHECK(w.alpha == doctest::Approx(0.2));
  CHECK(w.beta == doctest::Approx(0.7));
  CHECK(w.tail_bound <= 2 * std::pow(w.nu, 1000) * (1 + 1e-12));
  CHECK(w.tail_bound < 1e-20);
  CHECK_THROWS_AS(make_window(100, 0.4, 0.5, 0.7), Error);
  CHECK_THROWS_AS(make_window(100, 0.4, 0.1, 0.3), Error);
}

TEST_CASE("bernstein sums") {
  auto one = [](double) { return 1.0; };
  for (int n : {10, 100, 1000}) {
    const double v = bernstein_sum(one, 0.3, 1, 0, n, 0.0, 1.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= 1.0 - 1e-12);
  }
  CHECK(std::abs(bernstein_sum(one, 0.5, 2, 0, 10000, 0.0, 1.0) - 0.5) <= 1e-3);
  auto arcsine = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
  CHECK(std::abs(bernstein_sum(arcsine, 0.5, 1, 0, 100000, 0.3, 0.7) - 2.0) <= 1e-2);
  CHECK(std::abs(bernstein_sum(arcsine, 0.5, 2, 0, 100000, 0.3, 0.7) - 1.0) <= 1e-2);
}
