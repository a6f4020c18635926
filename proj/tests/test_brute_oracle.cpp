#include <doctest.h>

#include "qwalk/brute_oracle.hpp"
#include "qwalk/error.hpp"
#include "qwalk/oned_engine.hpp"

using namespace qwalk;

TEST_CASE("two-step laws") {
  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  auto law = enumerate_joint(2, sym, Conditioning::Unconditioned);
  CHECK(law.exact_joint(1, 0) == Rational(1, 8));
  CHECK(law.exact_joint(0, 1) == Rational(1, 8));
  CHECK(law.exact_joint(0, 0) == Rational(3, 4));

  auto exc = enumerate_joint(2, sym, Conditioning::NonNegativeBridge);
  CHECK(exc.exact_event_probability() == Rational(1, 8));
  CHECK(exc.exact_conditional(1, 0) == Rational(1, 2));
  CHECK(exc.exact_conditional(0, 1) == Rational(1, 2));
  CHECK(exc.exact_conditional(0, 0) == 0);

  CHECK(enumerate_joint(2, sym, Conditioning::Meander).exact_event_probability() == Rational(3, 8));
}

TEST_CASE("caps and parity") {
  auto sym = StepDistribution::parse("1/4,1/4,1/4,1/4");
  try {
    enumerate_joint(kOracleMaxLength + 1, sym, Conditioning::Unconditioned);
    FAIL("expected CapTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapTooLarge);
  }
  try {
    enumerate_joint(1, sym, Conditioning::Bridge);
    FAIL("expected ParityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityViolation);
  }
}

TEST_CASE("unconditioned mass is one") {
  for (const char* w : {"1/4,1/4,1/4,1/4", "0.1,0.3,0.2,0.4", "1/10,1/5,3/10,2/5"}) {
    auto walk = StepDistribution::parse(w);
    for (int n = 0; n <= 14; ++n) CHECK(enumerate_joint(n, walk, Conditioning::Unconditioned).exact_event_probability() == 1);
  }
}

TEST_CASE("half-plane projection is a binomial mixture of 1D tables") {
  // Watching survival on axis 1 only, the first marginal must be the mixture
  // over H_n of the 1D law at the extracted parameter.
  auto walk = StepDistribution::parse("0.1,0.3,0.2,0.4");
  OracleOptions half{true, false};
  const Rational h1 = walk.exact_h(1);
  for (int n = 1; n <= 12; ++n) {
    auto law = enumerate_joint(n, walk, Conditioning::Meander, half);
    auto tables = joint_tables_upto(n, walk.exact_tilde_p(1));
    for (int r = 0; r < law.rows(); ++r) {
      Rational marginal = 0;
      for (int j = 0; j < law.cols(); ++j) marginal += law.exact_joint(r, j);
      Rational mixture = 0;
      for (int k = 0; k <= n; ++k) {
        const auto& t = tables[static_cast<std::size_t>(k)];
        if (r > t.max_returns()) continue;
        mixture += Rational(binomial(n, static_cast<unsigned long>(k))) * pow(h1, static_cast<unsigned long>(k)) *
                   pow(1 - h1, static_cast<unsigned long>(n - k)) * (t.at(r, false, true) + t.at(r, true, true));
      }
      CHECK(marginal == mixture);
    }
  }
}

TEST_CASE("quadrant survival is non-increasing") {
  auto walk = StepDistribution::parse("0.3,0.1,0.4,0.2");
  Rational previous = 1;
  for (int n = 0; n <= 14; ++n) {
    const Rational p = enumerate_joint(n, walk, Conditioning::Meander).exact_event_probability();
    CHECK(p <= previous);
    previous = p;
  }
}
