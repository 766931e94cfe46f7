#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qva/rational.hpp"

namespace qva {

// Truncated Laurent series in hbar alone: sum_{k=val..cap} a[k-val] * hbar^k.
// Coefficients are certified for every order <= cap; nothing is claimed beyond.
struct QSeries {
  int cap = 0;            // certified through hbar^cap inclusive
  int val = 0;            // index of a[0]
  std::vector<Rat> a;     // may be empty (the zero series)

  QSeries() = default;
  explicit QSeries(int cap_) : cap(cap_) {}

  static QSeries zero(int cap) { return QSeries(cap); }

  static QSeries from_rat(const Rat& c, int cap) {
    QSeries s(cap);
    if (c != 0 && cap >= 0) {
      s.val = 0;
      s.a = {c};
    }
    return s;
  }

  static QSeries one(int cap) { return from_rat(Rat(1), cap); }

  static QSeries hbar_pow(int k, int cap, const Rat& c = Rat(1)) {
    QSeries s(cap);
    if (c != 0 && k <= cap) {
      s.val = k;
      s.a = {c};
    }
    return s;
  }

  Rat at(int k) const {
    if (k < val || k - val >= (int)a.size()) return Rat(0);
    return a[k - val];
  }

  bool is_zero() const {
    for (const Rat& c : a)
      if (c != 0) return false;
    return true;
  }

  void normalize() {
    while (!a.empty() && a.back() == 0) a.pop_back();
    while (!a.empty() && val + (int)a.size() - 1 > cap) a.pop_back();
    size_t lead = 0;
    while (lead < a.size() && a[lead] == 0) ++lead;
    if (lead) {
      a.erase(a.begin(), a.begin() + lead);
      val += (int)lead;
    }
    if (a.empty()) val = 0;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (int k = val; k < val + (int)a.size(); ++k) {
      Rat c = at(k);
      if (c == 0) continue;
      if (!first) os << " + ";
      os << c;
      if (k != 0) os << "*h^" << k;
      first = false;
    }
    if (first) os << "0";
    os << "  (cap " << cap << ")";
    return os.str();
  }
};

inline QSeries operator+(const QSeries& x, const QSeries& y) {
  QSeries r(std::min(x.cap, y.cap));
  int lo = std::min(x.val, y.val);
  r.val = lo;
  int hi = std::min(r.cap, std::max(x.val + (int)x.a.size(), y.val + (int)y.a.size()) - 1);
  if (hi >= lo) {
    r.a.assign(hi - lo + 1, Rat(0));
    for (int k = lo; k <= hi; ++k) r.a[k - lo] = x.at(k) + y.at(k);
  }
  r.normalize();
  return r;
}

inline QSeries operator-(const QSeries& x) {
  QSeries r = x;
  for (Rat& c : r.a) c = -c;
  return r;
}

inline QSeries operator-(const QSeries& x, const QSeries& y) { return x + (-y); }

inline QSeries operator*(const QSeries& x, const QSeries& y) {
  if (x.is_zero() || y.is_zero())
    return QSeries::zero(std::min(x.cap, y.cap));
  // Order k certified iff k <= capX + valY and k <= capY + valX.
  QSeries r(std::min(x.cap + y.val, y.cap + x.val));
  r.val = x.val + y.val;
  int len = r.cap - r.val + 1;
  if (len <= 0) return QSeries::zero(r.cap);
  r.a.assign(len, Rat(0));
  for (int i = 0; i < (int)x.a.size(); ++i) {
    if (x.a[i] == 0) continue;
    for (int j = 0; j < (int)y.a.size(); ++j) {
      int k = x.val + i + y.val + j;
      if (k > r.cap) break;
      r.a[k - r.val] += x.a[i] * y.a[j];
    }
  }
  r.normalize();
  return r;
}

inline QSeries operator*(const Rat& c, const QSeries& x) {
  QSeries r = x;
  for (Rat& v : r.a) v *= c;
  r.normalize();
  return r;
}

inline QSeries qs_invert(const QSeries& x) {
  QSeries t = x;
  t.normalize();
  if (t.a.empty() || t.a[0] == 0)
    throw std::domain_error("QSeries invert: zero leading coefficient");
  QSeries r(x.cap - 2 * t.val);
  r.val = -t.val;
  int len = r.cap - r.val + 1;
  if (len <= 0) throw std::domain_error("QSeries invert: empty certified window");
  r.a.assign(len, Rat(0));
  Rat lead = t.a[0];
  r.a[0] = Rat(1) / lead;
  for (int m = 1; m < len; ++m) {
    Rat s(0);
    for (int j = 1; j <= m && j < (int)t.a.size(); ++j) s += t.a[j] * r.a[m - j];
    r.a[m] = -s / lead;
  }
  r.normalize();
  return r;
}

inline QSeries qs_div(const QSeries& x, const QSeries& y) { return x * qs_invert(y); }

inline QSeries qs_pow(const QSeries& x, long n) {
  if (n < 0) return qs_pow(qs_invert(x), -n);
  QSeries acc = QSeries::one(x.cap);
  for (long k = 0; k < n; ++k) acc = acc * x;
  return acc;
}

// exp of an hbar-divisible series (val >= 1): the sum terminates at the cap.
inline QSeries qs_exp(const QSeries& x) {
  QSeries t = x;
  t.normalize();
  if (!t.a.empty() && t.val < 1)
    throw std::domain_error("QSeries exp: argument must be divisible by hbar");
  QSeries acc = QSeries::one(x.cap);
  QSeries pw = QSeries::one(x.cap);
  for (int n = 1; n <= x.cap && !pw.is_zero(); ++n) {
    pw = pw * t;
    acc = acc + Rat(1) / factorial(n) * pw;
  }
  return acc;
}

// log of a unit with constant term 1.
inline QSeries qs_log(const QSeries& x) {
  QSeries t = x;
  t.normalize();
  if (t.val != 0 || t.a.empty() || t.a[0] != 1)
    throw std::domain_error("QSeries log: constant term must be 1");
  QSeries y = t - QSeries::one(x.cap);
  QSeries acc = QSeries::zero(x.cap);
  QSeries pw = QSeries::one(x.cap);
  for (int n = 1; n <= x.cap && !(pw * y).is_zero(); ++n) {
    pw = pw * y;
    acc = acc + Rat((n % 2) ? 1 : -1, n) * pw;
  }
  return acc;
}

// sqrt of a unit with constant term 1.
inline QSeries qs_sqrt(const QSeries& x) {
  QSeries t = x;
  t.normalize();
  if (t.val != 0 || t.a.empty() || t.a[0] != 1)
    throw std::domain_error("QSeries sqrt: constant term must be 1");
  QSeries y = t - QSeries::one(x.cap);
  QSeries acc = QSeries::one(x.cap);
  QSeries pw = QSeries::one(x.cap);
  for (int n = 1; n <= x.cap && !(pw * y).is_zero(); ++n) {
    pw = pw * y;
    acc = acc + binom_rat(Rat(1, 2), n) * pw;
  }
  return acc;
}

// Equality on the common certified window; both series compared order by order.
inline bool qs_eq(const QSeries& x, const QSeries& y) {
  int cap = std::min(x.cap, y.cap);
  int lo = std::min(x.val, y.val);
  for (int k = lo; k <= cap; ++k)
    if (x.at(k) != y.at(k)) return false;
  return true;
}

// f0(c*hbar) where f0(z) = sum_{n>=0} z^{2n} / (4^n (2n+1)!).
inline QSeries f0_eval(const Rat& c, int cap) {
  QSeries r(cap);
  r.val = 0;
  r.a.assign(cap + 1, Rat(0));
  Rat c2 = c * c / 4;
  Rat pw(1);
  for (int n = 0; 2 * n <= cap; ++n) {
    r.a[2 * n] = pw / factorial(2 * n + 1);
    pw *= c2;
  }
  r.normalize();
  return r;
}

// f(c*hbar) = c*hbar*f0(c*hbar) with f(z) = e^{z/2} - e^{-z/2}.
inline QSeries f_eval(const Rat& c, int cap) {
  return QSeries::hbar_pow(1, cap, c) * f0_eval(c, cap);
}

// The q-integer [c]_q = c f0(2c hbar)/f0(2 hbar) with q = e^hbar; for integer n
// this equals (q^n - q^-n)/(q - q^-1).
inline QSeries qnum(const Rat& c, int cap) {
  return c * qs_div(f0_eval(2 * c, cap), f0_eval(Rat(2), cap));
}

// [c]_{q^b} = c f0(2cb hbar)/f0(2b hbar): q-integer in base q^b.
inline QSeries qnum_base(const Rat& c, const Rat& b, int cap) {
  return c * qs_div(f0_eval(2 * c * b, cap), f0_eval(2 * b, cap));
}

}  // namespace qva
