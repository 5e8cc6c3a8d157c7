#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace capsdp {

// Arbitrary precision rational; gmpxx keeps results of arithmetic in
// canonical form (lowest terms, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p", "p/q" and decimal literals such as "0.25" or "-1e-3".
Rational parse_rational(std::string_view text);

// Exact binary value of a finite double.
inline Rational rational_from_double(double x) {
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

// Always "num/den", e.g. "1/1" and "-3/4".
inline std::string to_string(const Rational& r) {
  return r.get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double x) { return x; }

inline Rational abs(const Rational& r) { return ::abs(r); }

}  // namespace capsdp
