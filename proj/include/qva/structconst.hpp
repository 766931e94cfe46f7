#pragma once

#include <string>
#include <vector>

#include "qva/cartan.hpp"
#include "qva/qseries.hpp"

namespace qva {

// [t]_{q^b}! as an exact hbar-series.
inline QSeries q_factorial(long t, const Rat& b, int cap) {
  QSeries acc = QSeries::one(cap);
  for (long s = 1; s <= t; ++s) acc = acc * qnum_base(Rat(s), b, cap);
  return acc;
}

// binom(n, t)_{q^b} via the descending product; n may be negative.
inline QSeries q_binom(long n, long t, const Rat& b, int cap) {
  if (t < 0) return QSeries::zero(cap);
  QSeries acc = QSeries::one(cap);
  for (long s = 0; s < t; ++s) acc = acc * qnum_base(Rat(n - s), b, cap);
  return qs_div(acc, q_factorial(t, b, cap));
}

// q^a - q^{-a} = f(2a hbar).
inline QSeries q_minus_qinv(const Rat& a, int cap) { return f_eval(2 * a, cap); }

// -----------------------------------------------------------------------------
// Serre-word coefficients.
// -----------------------------------------------------------------------------

// Closed form: [t]_{q^{r_i}}! (q^{r_i}-q^{-r_i})^t
//              * binom(k,t)_{q^{r_i}} * binom(k-1+a_ij,t)_{q^{r_i}}.
// The telescoping product of f-factors gives exactly this; note that
// q^{r_i}-q^{-r_i} is a single factor, not r_i (q - q^{-1}).
inline QSeries serre_coeff(const CartanDatum& d, int i, int j, long k, long t,
                           int cap) {
  if (d.a(i, j) > 0 || t < 0 || t > k)
    throw std::domain_error("serre_coeff: domain");
  Rat ri(d.ri[i]);
  QSeries acc = q_factorial(t, ri, cap);
  acc = acc * qs_pow(q_minus_qinv(ri, cap), t);
  acc = acc * q_binom(k, t, ri, cap);
  acc = acc * q_binom(k - 1 + d.a(i, j), t, ri, cap);
  return acc;
}

// Brute-force oracle: the scalar prefactor of the J-term in the ordered
// product expansion.  Generator slots 1..k carry index i at the points
// z + r_i(2(k-c)+a_ij) hbar, slot k+1 carries index j at z; the factor for an
// ordered pair (a in J, b not in J) is
//     f(z_a-z_b)^{-delta + q^{-n}},   n = r_{i_a} a_{i_a,i_b},
// which evaluates at hbar multiples.  Returns exact 0 when a factor vanishes;
// throws when a denominator factor vanishes.
inline QSeries serre_oracle(const CartanDatum& d, int i, int j, long k,
                            unsigned long Jmask, int cap) {
  auto gen = [&](long c) { return c <= k ? i : j; };
  auto zpt = [&](long c) {
    return c <= k ? Rat(d.ri[i]) * (2 * (k - c) + d.a(i, j)) : Rat(0);
  };
  QSeries acc = QSeries::one(cap);
  bool zero = false;
  for (long a = 1; a <= k + 1; ++a) {
    if (!(Jmask >> (a - 1) & 1)) continue;
    for (long b = 1; b <= k + 1; ++b) {
      if (Jmask >> (b - 1) & 1) continue;
      int ia = gen(a), ib = gen(b);
      Rat n = Rat(d.ri[ia] * d.a(ia, ib));
      Rat c = zpt(a) - zpt(b);
      if (ia == ib && c == 0)
        throw std::domain_error("serre_oracle: vanishing denominator factor");
      if (c - n == 0) zero = true;
      if (zero) continue;
      if (ia == ib) acc = acc * qs_invert(f_eval(c, cap));
      acc = acc * f_eval(c - n, cap);
    }
  }
  if (zero) return QSeries::zero(cap);
  return acc;
}

// All subsets of {1..k+1} with a nonzero oracle value, as bitmasks.
inline std::vector<unsigned long> support_scan(const CartanDatum& d, int i,
                                               int j, long k, int cap) {
  std::vector<unsigned long> out;
  for (unsigned long J = 0; J < (1ul << (k + 1)); ++J)
    if (!serre_oracle(d, i, j, k, J, cap).is_zero()) out.push_back(J);
  return out;
}

// -----------------------------------------------------------------------------
// Integrability coefficients.
// -----------------------------------------------------------------------------

// Closed form: f0(2 t r_i hbar) binom(k-1,t)_{q^{r_i}} binom(k,t)_{q^{r_i}}
// / binom(k-1,t).  The quotient of the (k-1)-binomials is read as the product
// of well-defined ratios [m]_{q^{r_i}}/m = f0(2 m r_i hbar)/f0(2 r_i hbar)
// (times t!/[t]_{q^{r_i}}!), which extends through the 0/0 at t = k.
inline QSeries int_coeff(const CartanDatum& d, int i, long k, long t, int cap) {
  if (t < 0 || t > k) throw std::domain_error("int_coeff: domain");
  Rat ri(d.ri[i]);
  QSeries acc = f0_eval(2 * Rat(t) * ri, cap);
  acc = acc * q_binom(k, t, ri, cap);
  QSeries base = f0_eval(2 * ri, cap);
  for (long s = 0; s < t; ++s)
    acc = acc * qs_div(f0_eval(2 * Rat(k - 1 - s) * ri, cap), base);
  acc = acc * QSeries::from_rat(factorial(t), cap);
  acc = qs_div(acc, q_factorial(t, ri, cap));
  return acc;
}

// Oracle from the ordered-product expansion of the k-fold (-1)-product on the
// vacuum: slots 1..k at the points z + 2(k-a) r_i hbar, the surviving subset
// for the t-term is the suffix J = {t+1..k}, and the two tensor factors give
// back (t- and (k-t)-fold) products that strip their own f0 prefactors.
inline QSeries int_oracle(const CartanDatum& d, int i, long k, long t, int cap) {
  if (t < 0 || t > k) throw std::domain_error("int_oracle: domain");
  Rat ri(d.ri[i]);
  QSeries acc = QSeries::one(cap);
  for (long a = 1; a <= k - 1; ++a) acc = acc * f0_eval(2 * Rat(a) * ri, cap);
  for (long a = t + 1; a <= k; ++a)
    for (long b = 1; b <= t; ++b) {
      // f(z_a-z_b)^{-1+q^{-2 r_i}} at z_a-z_b = 2 r_i (b-a) hbar
      acc = acc * f_eval(2 * ri * Rat(b - a - 1), cap);
      acc = qs_div(acc, f_eval(2 * ri * Rat(b - a), cap));
    }
  for (long a = 1; a <= t - 1; ++a)
    acc = qs_div(acc, f0_eval(2 * Rat(a) * ri, cap));
  for (long a = 1; a <= k - t - 1; ++a)
    acc = qs_div(acc, f0_eval(2 * Rat(a) * ri, cap));
  return acc;
}

// The analogous support pattern for the integrability expansion: subsets of
// {1..k} at the points z + 2(k-a) r_i hbar, all slots carrying index i.
inline bool int_support_is_suffix_only(const CartanDatum& d, int i, long k,
                                       int cap) {
  for (unsigned long J = 0; J < (1ul << k); ++J) {
    bool zero = false;
    for (long a = 1; a <= k && !zero; ++a) {
      if (!(J >> (a - 1) & 1)) continue;
      for (long b = 1; b <= k; ++b) {
        if (J >> (b - 1) & 1) continue;
        if (b - a - 1 == 0) zero = true;  // the only vanishing factor argument
      }
    }
    bool suffix = true;
    bool seen = false;
    for (long a = 1; a <= k; ++a) {
      bool in = J >> (a - 1) & 1;
      if (in) seen = true;
      if (seen && !in) suffix = false;
    }
    if (zero == suffix) return false;  // survivors must be exactly the suffixes
  }
  return true;
}

// -----------------------------------------------------------------------------
// Structure-constant closure scan: at the Serre exponent k = 1 - a_ij every
// coefficient with t >= 1 vanishes (ideal preservation at the constant level),
// and the integrability closed form matches its oracle at k = r*l/r_i.
// -----------------------------------------------------------------------------
struct ClosureReport {
  bool pass = true;
  std::vector<std::string> failures;
  void note(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

inline ClosureReport closure_checks(const CartanDatum& d, const Rat& ell,
                                    int cap) {
  ClosureReport rep;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      if (i == j || d.a(i, j) == 0) continue;
      long k = d.m_serre(i, j);
      std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      rep.note(qs_eq(serre_coeff(d, i, j, k, 0, cap), QSeries::one(cap)),
               "serre-closure-t0 " + tag);
      for (long t = 1; t <= k; ++t)
        rep.note(serre_coeff(d, i, j, k, t, cap).is_zero(),
                 "serre-closure " + tag + " t=" + std::to_string(t));
    }
  for (int i = 0; i < d.n; ++i) {
    Rat kq = Rat(d.r) * ell / d.ri[i];
    if (!is_integer(kq) || kq < 0) continue;
    long k = rat_to_long(kq, "integrability exponent");
    for (long t = 0; t <= k; ++t)
      rep.note(qs_eq(int_coeff(d, i, k, t, cap), int_oracle(d, i, k, t, cap)),
               "int-closure i=" + std::to_string(i) + " t=" + std::to_string(t));
    rep.note(int_support_is_suffix_only(d, i, k, cap),
             "int-support i=" + std::to_string(i));
  }
  return rep;
}

}  // namespace qva
