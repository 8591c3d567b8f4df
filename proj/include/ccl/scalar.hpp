#pragma once

// Scalar tower: exact GMP rationals and IEEE doubles behind one vocabulary.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <string>
#include <string_view>

#include "ccl/errors.hpp"

namespace ccl {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

/// Outcome of a sign decision. Exact arithmetic never yields Indeterminate.
enum class Sign { Negative = -1, Zero = 0, Positive = 1, Indeterminate = 2 };

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "positive";
    case Sign::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// Float comparison tolerance. The exact path ignores it.
struct Tolerance {
  double eps = 1e-9;

  /// Default tolerance, overridden by the CCL_EPS environment variable.
  static Tolerance from_env() {
    Tolerance t;
    if (const char* s = std::getenv("CCL_EPS")) {
      char* end = nullptr;
      double v = std::strtod(s, &end);
      if (end != s && v > 0.0 && std::isfinite(v)) t.eps = v;
    }
    return t;
  }
};

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

template <Scalar T>
T from_double(double v);
template <>
inline double from_double<double>(double v) { return v; }
template <>
inline Rational from_double<Rational>(double v) { return Rational(v); }

template <Scalar T>
T from_rational(const Rational& q);
template <>
inline double from_rational<double>(const Rational& q) { return q.get_d(); }
template <>
inline Rational from_rational<Rational>(const Rational& q) { return q; }

inline int sign_int(const Rational& q) { return sgn(q); }
inline int sign_int(double v) { return (v > 0.0) - (v < 0.0); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double v) { return v == 0.0; }

inline Rational abs_value(const Rational& q) { return abs(q); }
inline double abs_value(double v) { return std::fabs(v); }

/// Exact sign of a rational.
inline Sign sign_of(const Rational& q) {
  int s = sgn(q);
  return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero);
}

/// Sign of a float relative to `scale`; values inside the eps band are Indeterminate.
inline Sign sign_of(double v, double scale, const Tolerance& tol = {}) {
  if (v == 0.0 && scale == 0.0) return Sign::Zero;
  if (std::fabs(v) <= tol.eps * scale) return Sign::Indeterminate;
  return v > 0.0 ? Sign::Positive : Sign::Negative;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// "p/q" for non-integers, "p" for integers.
inline std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

/// Parses "3", "-3/4", "0.125", "1e-3" exactly. Decimal text is read as the
/// decimal fraction it denotes, not as the nearest double.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ParseError("empty number");
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) --exponent;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("bad number '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw ParseError("bad number '" + s + "'");
    std::string exp_text = s.substr(pos + 1);
    char* end = nullptr;
    long e = std::strtol(exp_text.c_str(), &end, 10);
    if (exp_text.empty() || *end != '\0') throw ParseError("bad exponent in '" + s + "'");
    exponent += e;
  }
  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace ccl
