#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qva {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

// a^n for integer n (n < 0 inverts; 0^0 = 1).
inline Rat rat_pow(const Rat& a, long n) {
  if (n == 0) return Rat(1);
  if (n < 0) {
    if (a == 0) throw std::domain_error("rat_pow: zero base, negative exponent");
    return Rat(1) / rat_pow(a, -n);
  }
  Rat acc(1), base(a);
  long e = n;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

inline Rat factorial(long n) {
  Rat acc(1);
  for (long k = 2; k <= n; ++k) acc *= k;
  return acc;
}

// Ordinary binomial coefficient, integer top allowed to be negative.
inline Rat binom(long n, long t) {
  if (t < 0) return Rat(0);
  Rat acc(1);
  for (long s = 0; s < t; ++s) acc *= Rat(n - s, s + 1);
  return acc;
}

// binom(alpha, t) for rational alpha (used by sqrt series).
inline Rat binom_rat(const Rat& alpha, long t) {
  Rat acc(1);
  for (long s = 0; s < t; ++s) acc *= (alpha - s) / Rat(s + 1);
  return acc;
}

// Exact conversion helpers: rationals that must be integers.
inline long rat_to_long(const Rat& a, const char* what = "value") {
  if (denominator(a) != 1)
    throw std::domain_error(std::string(what) + ": expected an integer");
  Int n = numerator(a);
  return static_cast<long>(n);
}

inline bool is_integer(const Rat& a) { return denominator(a) == 1; }

}  // namespace qva
