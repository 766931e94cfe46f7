#pragma once

#include <map>
#include <sstream>

#include "qva/qseries.hpp"

namespace qva {

// Finite combination sum_m a_m q^m with rational exponents m and rational
// coefficients a_m.  With q = e^hbar this is the exponent bookkeeping object
// for twisted powers P(z)^{g(q)} and for scalar specializations.
struct QExp {
  std::map<Rat, Rat> c;  // exponent -> coefficient, zeros pruned

  QExp() = default;

  static QExp zero() { return QExp(); }

  static QExp term(const Rat& m, const Rat& a = Rat(1)) {
    QExp g;
    if (a != 0) g.c[m] = a;
    return g;
  }

  static QExp one() { return term(Rat(0)); }

  // q^m
  static QExp qpow(const Rat& m) { return term(m); }

  void add_term(const Rat& m, const Rat& a) {
    auto it = c.find(m);
    if (it == c.end()) {
      if (a != 0) c[m] = a;
    } else {
      it->second += a;
      if (it->second == 0) c.erase(it);
    }
  }

  bool is_zero() const { return c.empty(); }

  // Sum of coefficients = value at q = 1 (classical specialization).
  Rat at_q1() const {
    Rat s(0);
    for (auto& [m, a] : c) s += a;
    return s;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [m, a] : c) {
      if (!first) os << " + ";
      os << a << "*q^(" << m << ")";
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }
};

inline QExp operator+(const QExp& x, const QExp& y) {
  QExp r = x;
  for (auto& [m, a] : y.c) r.add_term(m, a);
  return r;
}

inline QExp operator-(const QExp& x) {
  QExp r;
  for (auto& [m, a] : x.c) r.c[m] = -a;
  return r;
}

inline QExp operator-(const QExp& x, const QExp& y) { return x + (-y); }

inline QExp operator*(const QExp& x, const QExp& y) {
  QExp r;
  for (auto& [m1, a1] : x.c)
    for (auto& [m2, a2] : y.c) r.add_term(m1 + m2, a1 * a2);
  return r;
}

inline QExp operator*(const Rat& s, const QExp& x) {
  QExp r;
  if (s != 0)
    for (auto& [m, a] : x.c) r.c[m] = s * a;
  return r;
}

// q -> q^{-1}
inline QExp qexp_bar(const QExp& x) {
  QExp r;
  for (auto& [m, a] : x.c) r.c[-m] = a;
  return r;
}

inline bool operator==(const QExp& x, const QExp& y) { return x.c == y.c; }

// [n]_q as a finite q-combination: q^{n-1} + q^{n-3} + ... + q^{1-n} for
// positive integers; extended to negative n by antisymmetry, [0] = 0.
inline QExp qexp_qint(long n) {
  QExp r;
  long s = n < 0 ? -1 : 1;
  for (long k = 0; k < s * n; ++k) r.add_term(Rat(s * n - 1 - 2 * k), Rat(s));
  return r;
}

// Evaluate g(e^hbar) as an hbar-series.
inline QSeries qexp_eval(const QExp& x, int cap) {
  QSeries r = QSeries::zero(cap);
  for (auto& [m, a] : x.c)
    r = r + a * qs_exp(QSeries::hbar_pow(1, cap, m));
  return r;
}

// -----------------------------------------------------------------------------
// OpSeries: an operator of the form hbar^hpow * u(w) with w = hbar * d/dz and
// u a power series in w.  The underlying series reuses QSeries with the formal
// variable read as w.  Application to z-series lives with the series type.
// -----------------------------------------------------------------------------
struct OpSeries {
  int hpow = 0;   // global hbar prefactor
  QSeries u;      // series in w, certified through w^{u.cap}

  OpSeries() = default;
  OpSeries(int hpow_, QSeries u_) : hpow(hpow_), u(std::move(u_)) {
    if (u.val < 0) throw std::domain_error("OpSeries: negative powers of d/dz");
  }

  static OpSeries identity(int cap) { return OpSeries(0, QSeries::one(cap)); }

  // e^{c w}: the shift z -> z + c*hbar.
  static OpSeries shift(const Rat& c, int cap) {
    return OpSeries(0, qs_exp(QSeries::hbar_pow(1, cap, c)));
  }

  // g(q^{d/dz}) = g(e^w).
  static OpSeries from_qexp(const QExp& g, int cap) {
    return OpSeries(0, qexp_eval(g, cap));
  }

  // [c]_{q^{d/dz}} = c f0(2cw) f0(2w)^{-1}.
  static OpSeries qbracket(const Rat& c, int cap) {
    return OpSeries(0, qnum(c, cap));
  }

  // f0(2w) itself (the smoothing factor 2 hbar f0(2 hbar d/dz) = f(hbar d/dz)/(d/dz)... ).
  static OpSeries f0_2w(int cap) { return OpSeries(0, f0_eval(Rat(2), cap)); }

  // hbar^k as an operator.
  static OpSeries hbar(int k, int cap) {
    return OpSeries(k, QSeries::one(cap));
  }

  bool is_zero() const { return u.is_zero(); }
};

inline OpSeries operator*(const OpSeries& x, const OpSeries& y) {
  return OpSeries(x.hpow + y.hpow, x.u * y.u);
}

inline OpSeries operator*(const Rat& c, const OpSeries& x) {
  return OpSeries(x.hpow, c * x.u);
}

inline OpSeries op_add(const OpSeries& x, const OpSeries& y) {
  if (x.hpow == y.hpow) return OpSeries(x.hpow, x.u + y.u);
  // Fold the smaller prefactor into the series; only possible downward since
  // u must stay a power series in w alone -- push hbar^k as explicit scalar.
  throw std::domain_error("OpSeries add: mismatched hbar prefactors");
}

inline OpSeries op_sub(const OpSeries& x, const OpSeries& y) {
  if (x.hpow != y.hpow)
    throw std::domain_error("OpSeries sub: mismatched hbar prefactors");
  return OpSeries(x.hpow, x.u - y.u);
}

inline OpSeries op_invert(const OpSeries& x) {
  return OpSeries(-x.hpow, qs_invert(x.u));
}

}  // namespace qva
