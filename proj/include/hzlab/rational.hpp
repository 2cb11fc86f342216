#pragma once

// Exact arithmetic primitives shared by every hzlab module.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hzlab {

using Integer = mpz_class;
using Rational = mpq_class;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "a/b", "a" or "-a/b". Decimal points, whitespace and zero
/// denominators are rejected.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!digits(num) || !digits(den))
    throw ParseError("malformed rational '" + std::string(text) + "' (expected a/b)");
  Integer d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(Integer(std::string(num), 10), d);
  r.canonicalize();
  if (text.front() == '-') r = -r;
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline Rational rpow(const Rational& base, unsigned long exp) {
  Rational out(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
  out.canonicalize();
  return out;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents plus the last semiconvergent).
inline Rational limit_denominator(double x, long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("limit_denominator: non-finite input");
  if (max_den < 1) throw std::invalid_argument("limit_denominator: max_den < 1");
  const bool negative = x < 0;
  Rational target(std::fabs(x));  // exact binary value of x
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = target;
  const Integer cap = max_den;
  while (true) {
    Integer a = floor(rest);
    Integer q2 = q0 + a * q1;
    if (q2 > cap) break;
    Integer p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  Rational best(p1, q1);
  if (q1 == 0) best = Rational(p0, q0);
  // Semiconvergent p0 + k p1 / (q0 + k q1) with the largest admissible k.
  if (q1 != 0) {
    Integer k = (cap - q0) / q1;
    Rational semi(p0 + k * p1, q0 + k * q1);
    semi.canonicalize();
    if (abs(Rational(semi - target)) < abs(Rational(best - target))) best = semi;
  }
  best.canonicalize();
  return negative ? Rational(-best) : best;
}

/// Comparison policy used by the templated numerical kernels. Rationals
/// compare exactly; doubles use an absolute tolerance.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool is_positive(const Rational& x) { return sgn(x) > 0; }
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static Rational from(const Rational& x) { return x; }
};

template <>
struct ScalarTraits<double> {
  static constexpr double tolerance = 1e-9;
  static bool is_zero(double x) { return std::fabs(x) <= tolerance; }
  static bool is_positive(double x) { return x > tolerance; }
  static bool is_negative(double x) { return x < -tolerance; }
  static bool less(double a, double b) { return a < b - tolerance; }
  static bool equal(double a, double b) { return std::fabs(a - b) <= tolerance; }
  static double from(const Rational& x) { return x.get_d(); }
};

}  // namespace hzlab
