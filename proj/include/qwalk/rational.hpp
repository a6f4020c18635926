#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qwalk {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "3", "-2", "1/4", "0.125", "1e-3" and returns the exact value.
Rational parse_rational(std::string_view text);

// "num/den", or just "num" when the denominator is one.
std::string format_rational(const Rational& value);

// 17 significant digits; round-trips a double.
std::string format_double(double value);

BigInt binomial(unsigned long n, unsigned long k);

inline Rational pow(const Rational& base, unsigned long exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  return out;
}

}  // namespace qwalk
