#include <doctest.h>

#include <cmath>

#include "qwalk/error.hpp"
#include "qwalk/oned_engine.hpp"

using namespace qwalk;

namespace {

const Rational kHalf(1, 2);

Rational closed_form_returns(int m, int r) {
  Rational out(binomial(static_cast<unsigned long>(2 * m - r), static_cast<unsigned long>(m)));
  return out / pow(Rational(2), static_cast<unsigned long>(2 * m - r));
}

}  // namespace

TEST_CASE("length-2 table by enumeration") {
  auto t = joint_table(2, kHalf);
  CHECK(t.at(1, true, true) == Rational(1, 4));
  CHECK(t.at(1, true, false) == Rational(1, 4));
  CHECK(t.at(0, false, true) == Rational(1, 4));
  CHECK(t.at(0, false, false) == Rational(1, 4));
  CHECK(t.total() == 1);
}

TEST_CASE("length-0 table is a point mass") {
  auto t = joint_table(0, Rational(1, 3));
  CHECK(t.at(0, true, true) == 1);
  CHECK(t.total() == 1);
}

TEST_CASE("length-4 return marginal") {
  auto t = joint_table(4, kHalf);
  CHECK(t.returns_marginal(0) == Rational(3, 8));
  CHECK(t.returns_marginal(1) == Rational(3, 8));
  CHECK(t.returns_marginal(2) == Rational(1, 4));
}

TEST_CASE("return marginal matches the closed form for even lengths up to 24") {
  for (int m = 0; m <= 12; ++m) {
    auto t = joint_table(2 * m, kHalf);
    for (int r = 0; r <= m; ++r) CHECK(t.returns_marginal(r) == closed_form_returns(m, r));
  }
}

TEST_CASE("theta pmf examples") {
  CHECK(theta_pmf(1, 2) == Rational(1, 2));
  CHECK(theta_pmf(1, 4) == Rational(1, 8));
  CHECK(theta_pmf(2, 4) == Rational(1, 4));
  CHECK(theta_survival_pmf(1, 2) == Rational(1, 4));
  CHECK(theta_survival_pmf(1, 4) == Rational(1, 16));
  CHECK(theta_survival_pmf(2, 4) == Rational(1, 16));
  CHECK_THROWS_AS(theta_pmf(1, 3), Error);
}

TEST_CASE("flip identity and closed form of theta from the table") {
  for (int n = 2; n <= 24; n += 2) {
    auto t = joint_table(n, kHalf);
    for (int r = 1; r <= n / 2; ++r) {
      const Rational all = t.at(r, true, false) + t.at(r, true, true);
      CHECK(all == theta_pmf(r, n));
      CHECK(t.at(r, true, true) == all / pow(Rational(2), static_cast<unsigned long>(r)));
      CHECK(t.at(r, true, true) == theta_survival_pmf(r, n));
    }
  }
}

TEST_CASE("odd lengths do not change the return count") {
  for (const Rational& p : {kHalf, Rational(1, 4), Rational(2, 3)}) {
    auto tables = joint_tables_upto(25, p);
    for (int m = 0; m <= 12; ++m) {
      for (int r = 0; r <= m; ++r)
        CHECK(tables[static_cast<std::size_t>(2 * m + 1)].returns_marginal(r) ==
              tables[static_cast<std::size_t>(2 * m)].returns_marginal(r));
    }
  }
}

TEST_CASE("bridge law of the returns does not depend on p") {
  for (int k = 2; k <= 24; k += 2) {
    auto a = joint_table(k, 0.5);
    auto b = joint_table(k, 0.25);
    for (int r = 0; r <= k / 2; ++r) {
      const double ca = (a.at(r, true, false) + a.at(r, true, true)) / a.endpoint_zero();
      const double cb = (b.at(r, true, false) + b.at(r, true, true)) / b.endpoint_zero();
      CHECK(std::abs(ca - cb) <= 1e-12);
    }
  }
}

TEST_CASE("survival probability") {
  CHECK(survival(4, kHalf) == Rational(3, 8));
  CHECK(survival(0, Rational(1, 3)) == 1);
  CHECK(survival(1, Rational(1, 4)) == Rational(1, 4));
  for (int k = 0; k <= 24; k += 2) {
    auto t = joint_table(k, kHalf);
    CHECK(survival(k, kHalf) == t.endpoint_zero());
    CHECK(t.survival() == survival(k, kHalf));
  }
  CHECK(survival(40, 0.3) == doctest::Approx(survival(40, Rational(3, 10)).get_d()).epsilon(1e-12));
}

TEST_CASE("float and exact tables agree") {
  auto e = joint_table(30, Rational(3, 10));
  auto f = joint_table(30, 0.3);
  for (int r = 0; r <= 15; ++r)
    for (bool z : {false, true})
      for (bool s : {false, true}) CHECK(std::abs(f.at(r, z, s) - e.at(r, z, s).get_d()) <= 1e-15);
}

TEST_CASE("renewal profiles agree with the table DP") {
  const int n = 60;
  for (double p : {0.5, 0.25, 0.8}) {
    auto tables = joint_tables_upto(n, p);
    for (OneDimEvent event :
         {OneDimEvent::Any, OneDimEvent::EndpointZero, OneDimEvent::Survival, OneDimEvent::SurvivalEndpointZero}) {
      auto prof = return_profiles(n, p, event);
      for (int k = 0; k <= n; ++k) {
        const auto& t = tables[static_cast<std::size_t>(k)];
        for (int r = 0; r <= k / 2; ++r) {
          double want = 0.0;
          for (bool z : {false, true})
            for (bool s : {false, true}) {
              if ((event == OneDimEvent::EndpointZero || event == OneDimEvent::SurvivalEndpointZero) && !z) continue;
              if ((event == OneDimEvent::Survival || event == OneDimEvent::SurvivalEndpointZero) && !s) continue;
              want += t.at(r, z, s);
            }
          CHECK(prof.mass(k, r) == doctest::Approx(want).epsilon(1e-10).scale(1e-300));
        }
      }
    }
  }
}

TEST_CASE("integer profiles divided by the total weight give probabilities") {
  const BigInt up = 1, down = 3;
  auto w = integer_profiles(12, up, down, OneDimEvent::Survival);
  auto tables = joint_tables_upto(12, Rational(1, 4));
  for (int k = 0; k <= 12; ++k) {
    const Rational denom(BigInt(pow(Rational(4), static_cast<unsigned long>(k)).get_num()));
    for (int r = 0; r <= k / 2; ++r) {
      const auto& t = tables[static_cast<std::size_t>(k)];
      const Rational want = t.at(r, false, true) + t.at(r, true, true);
      const Rational got = r < static_cast<int>(w[static_cast<std::size_t>(k)].size())
                               ? Rational(w[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)]) / denom
                               : Rational(0);
      CHECK(got == want);
    }
  }
}

TEST_CASE("capacity of the exact DP") {
  CHECK_THROWS_AS(joint_table(kMaxExactTableLength + 1, kHalf), Error);
}
