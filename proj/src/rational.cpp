#include "qwalk/rational.hpp"

#include <cctype>
#include <cstdio>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::CapTooLarge: return "CapTooLarge";
    case ErrorCode::WindowViolation: return "WindowViolation";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::ZeroUnsupported: return "ZeroUnsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) fail(ErrorCode::ParseError, "not a number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      fail(ErrorCode::ParseError, "not a number: '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(digits));
}

// Decimal with optional sign, fraction and exponent, parsed exactly.
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    BigInt mag = parse_integer(exp_text, text);
    if (!mag.fits_slong_p() || abs(mag) > 4096) {
      fail(ErrorCode::ParseError, "exponent out of range: '" + std::string(text) + "'");
    }
    exponent = mag.get_si() * (exp_negative ? -1 : 1);
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) parse_integer("", text);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    digits = std::string(s);
  }
  BigInt mantissa = parse_integer(digits, text);
  Rational out(mantissa);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0) {
    out /= scale;
  } else {
    out *= scale;
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(trim(s.substr(0, slash)));
    Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
    Rational out = num / den;
    out.canonicalize();
    return out;
  }
  return parse_decimal(s);
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace qwalk
