#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qva/qexp.hpp"
#include "qva/qseries.hpp"

namespace qva {

inline constexpr int Z_INF = 1 << 28;   // layer is exact (all coefficients known)
inline constexpr int Z_NONE = -(1 << 28);  // nothing certified in this layer

// Bivariate truncated series: sum_{k=0..N} hbar^k * (Laurent polynomial in z),
// plus an optional logz * log z marker (rational multiple, hbar^0 only).
//
// Each layer k carries a certified ceiling hi[k]: every z-exponent <= hi[k] in
// that layer is exact; above it nothing is claimed.  hi[k] == Z_INF means the
// whole layer is known exactly (typical for layers a construction leaves
// untouched).  Laurent polynomials are sparse maps exponent -> coefficient.
struct HSeries {
  int N = 0;
  std::vector<std::map<int, Rat>> c;  // size N+1
  std::vector<int> hi;                // size N+1
  Rat logz = 0;                       // coefficient of log z (hbar^0)

  HSeries() : c(1), hi(1, Z_INF) {}
  explicit HSeries(int N_) : N(N_), c(N_ + 1), hi(N_ + 1, Z_INF) {}

  static HSeries zero(int N) { return HSeries(N); }

  static HSeries monomial(int N, int zexp, int k, const Rat& a) {
    HSeries s(N);
    if (k <= N && a != 0) s.c[k][zexp] = a;
    return s;
  }

  static HSeries one(int N) { return monomial(N, 0, 0, Rat(1)); }

  // z + a*hbar as a linear polynomial.
  static HSeries z_plus(int N, const Rat& a) {
    HSeries s(N);
    s.c[0][1] = 1;
    if (N >= 1 && a != 0) s.c[1][0] = a;
    return s;
  }

  Rat at(int k, int e) const {
    if (k < 0 || k > N) return Rat(0);
    auto it = c[k].find(e);
    return it == c[k].end() ? Rat(0) : it->second;
  }

  void set(int k, int e, const Rat& a) {
    if (k < 0 || k > N) throw std::out_of_range("HSeries::set: layer");
    if (a == 0)
      c[k].erase(e);
    else
      c[k][e] = a;
  }

  bool is_zero() const {
    if (logz != 0) return false;
    for (auto& layer : c)
      for (auto& [e, a] : layer)
        if (a != 0) return false;
    return true;
  }

  // Lowest z-exponent that could be nonzero in layer k (content floor).  An
  // empty layer that is exact has floor +inf; an empty layer certified only
  // through hi has unknown content starting at hi+1.
  int floor_of(int k) const {
    for (auto& [e, a] : c[k])
      if (a != 0) return e;
    return hi[k] >= Z_INF ? Z_INF : hi[k] + 1;
  }

  void prune() {
    for (int k = 0; k <= N; ++k) {
      for (auto it = c[k].begin(); it != c[k].end();) {
        if (it->second == 0 || it->first > hi[k])
          it = c[k].erase(it);
        else
          ++it;
      }
    }
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    if (logz != 0) {
      os << logz << "*log(z)";
      first = false;
    }
    for (int k = 0; k <= N; ++k)
      for (auto& [e, a] : c[k]) {
        if (a == 0) continue;
        if (!first) os << " + ";
        os << a;
        if (k) os << "*h^" << k;
        if (e) os << "*z^" << e;
        first = false;
      }
    if (first) os << "0";
    os << "  [hi:";
    for (int k = 0; k <= N; ++k) {
      os << ' ';
      if (hi[k] >= Z_INF)
        os << "inf";
      else if (hi[k] <= Z_NONE)
        os << "none";
      else
        os << hi[k];
    }
    os << "]";
    return os.str();
  }
};

inline HSeries operator+(const HSeries& x, const HSeries& y) {
  HSeries r(std::min(x.N, y.N));
  r.logz = x.logz + y.logz;
  for (int k = 0; k <= r.N; ++k) {
    r.hi[k] = std::min(x.hi[k], y.hi[k]);
    r.c[k] = x.c[k];
    for (auto& [e, a] : y.c[k]) {
      auto [it, ins] = r.c[k].try_emplace(e, a);
      if (!ins) it->second += a;
    }
  }
  r.prune();
  return r;
}

inline HSeries operator*(const Rat& s, const HSeries& x) {
  HSeries r = x;
  r.logz *= s;
  if (s == 0) {
    for (auto& layer : r.c) layer.clear();
    r.logz = 0;
    return r;
  }
  for (auto& layer : r.c)
    for (auto& [e, a] : layer) a *= s;
  return r;
}

inline HSeries operator-(const HSeries& x) { return Rat(-1) * x; }
inline HSeries operator-(const HSeries& x, const HSeries& y) { return x + (-y); }

inline HSeries operator*(const HSeries& x, const HSeries& y) {
  if (x.logz != 0 || y.logz != 0)
    throw std::domain_error("HSeries mul: log marker not closed under products");
  HSeries r(std::min(x.N, y.N));
  // Certified ceiling per layer: each contributing layer pair (k1,k2) limits
  // the result to min(hiX[k1]+floorY[k2], hiY[k2]+floorX[k1]); pairs where one
  // side is exactly zero impose nothing.
  for (int k = 0; k <= r.N; ++k) {
    long best = Z_INF;
    for (int k1 = 0; k1 <= k; ++k1) {
      int k2 = k - k1;
      long fx = x.floor_of(k1), fy = y.floor_of(k2);
      if (fx >= Z_INF && x.hi[k1] >= Z_INF) continue;
      if (fy >= Z_INF && y.hi[k2] >= Z_INF) continue;
      long cand = std::min((long)x.hi[k1] + fy, (long)y.hi[k2] + fx);
      best = std::min(best, cand);
    }
    r.hi[k] = (int)std::max((long)Z_NONE, std::min((long)Z_INF, best));
  }
  for (int k1 = 0; k1 <= r.N; ++k1)
    for (auto& [e1, a1] : x.c[k1]) {
      if (a1 == 0) continue;
      for (int k2 = 0; k2 + k1 <= r.N; ++k2)
        for (auto& [e2, a2] : y.c[k2]) {
          int k = k1 + k2, e = e1 + e2;
          if (e > r.hi[k]) continue;
          auto [it, ins] = r.c[k].try_emplace(e, Rat(a1 * a2));
          if (!ins) it->second += a1 * a2;
        }
    }
  r.prune();
  return r;
}

// Multiply by z^m (exact; windows shift along).
inline HSeries mul_z_pow(const HSeries& x, int m) {
  if (x.logz != 0)
    throw std::domain_error("mul_z_pow: log marker present");
  HSeries r(x.N);
  for (int k = 0; k <= x.N; ++k) {
    r.hi[k] = x.hi[k] >= Z_INF ? Z_INF : x.hi[k] + m;
    for (auto& [e, a] : x.c[k]) r.c[k][e + m] = a;
  }
  return r;
}

// z -> -z: exponents are unchanged, odd coefficients flip sign.
inline HSeries subst_neg(const HSeries& x) {
  if (x.logz != 0)
    throw std::domain_error("subst_neg: log marker present");
  HSeries r = x;
  for (auto& layer : r.c)
    for (auto& [e, a] : layer)
      if (e & 1) a = -a;
  return r;
}

// d/dz, including the marker rule d/dz (v log z) = v / z.
inline HSeries derive(const HSeries& x) {
  HSeries r(x.N);
  for (int k = 0; k <= x.N; ++k) {
    r.hi[k] = x.hi[k] >= Z_INF ? Z_INF : x.hi[k] - 1;
    for (auto& [e, a] : x.c[k])
      if (e != 0 && e - 1 <= r.hi[k]) {
        auto [it, ins] = r.c[k].try_emplace(e - 1, Rat(e * a));
        if (!ins) it->second += e * a;
      }
  }
  if (x.logz != 0) {
    if (-1 > r.hi[0]) throw std::domain_error("derive: window too small for log marker");
    auto [it, ins] = r.c[0].try_emplace(-1, x.logz);
    if (!ins) it->second += x.logz;
  }
  r.prune();
  return r;
}

// Apply hbar^s * u(hbar d/dz).  The derivative of the log marker feeds in via
// D^j(v log z) = v (-1)^{j-1} (j-1)! z^{-j} for j >= 1; the j = 0 term keeps a
// marker only when s = 0.
inline HSeries apply_op(const OpSeries& op, const HSeries& x) {
  int s = op.hpow;
  HSeries r(x.N);
  // Certification per result layer.
  for (int k = 0; k <= x.N; ++k) {
    long best = Z_INF;
    int jmax = k - s;  // need source layer k-s-j in [0, N]
    for (int j = std::max(0, k - s - x.N); j <= jmax; ++j) {
      int src = k - s - j;
      bool exact_zero = x.c[src].empty() && x.hi[src] >= Z_INF;
      if (j > op.u.cap) {
        // unknown operator coefficient: fatal unless the source is exactly 0
        if (!exact_zero || (src == 0 && x.logz != 0)) best = Z_NONE;
        continue;
      }
      if (op.u.at(j) == 0) continue;
      if (exact_zero && !(src == 0 && x.logz != 0)) continue;
      long cand = (x.hi[src] >= Z_INF) ? (long)Z_INF : (long)x.hi[src] - j;
      best = std::min(best, cand);
    }
    r.hi[k] = (int)std::max((long)Z_NONE, std::min((long)Z_INF, best));
  }
  // Content.
  for (int src = 0; src <= x.N; ++src) {
    // falling-factorial derivatives of each monomial, reused across j
    for (auto& [e, a] : x.c[src]) {
      Rat fall = a;
      for (int j = 0;; ++j) {
        int k = src + s + j;
        if (k > x.N) break;
        if (j > op.u.cap) break;
        Rat uj = op.u.at(j);
        if (k >= 0 && uj != 0 && fall != 0) {
          int e2 = e - j;
          if (e2 <= r.hi[k]) {
            auto [it, ins] = r.c[k].try_emplace(e2, Rat(uj * fall));
            if (!ins) it->second += uj * fall;
          }
        }
        fall *= (e - j);
        if (fall == 0 && e >= 0 && j >= e) break;
      }
    }
  }
  if (x.logz != 0) {
    if (s == 0) {
      r.logz = op.u.at(0) * x.logz;
    } else if (op.u.at(0) != 0) {
      throw std::domain_error("apply_op: hbar-shifted log marker not representable");
    }
    for (int j = 1; j <= op.u.cap && s + j <= x.N; ++j) {
      int k = s + j;
      if (k < 0) continue;
      Rat uj = op.u.at(j);
      if (uj == 0) continue;
      Rat coef = x.logz * uj * ((j % 2) ? 1 : -1) * factorial(j - 1);
      if (-j <= r.hi[k]) {
        auto [it, ins] = r.c[k].try_emplace(-j, coef);
        if (!ins) it->second += coef;
      }
    }
  }
  r.prune();
  return r;
}

inline HSeries shift_z(const HSeries& x, const Rat& cshift) {
  return apply_op(OpSeries::shift(cshift, x.N), x);
}

// Helpers for the power-series loops (exp/log/sqrt/inverse).  Termination
// rests on two facts about an admissible argument y: every hbar^0 monomial has
// z-exponent >= 1, and hbar-degrees are bounded by N.  Monomials at positive
// hbar layers may carry negative z-exponents down to emin(y); a product of n
// factors landing in layer K then has z-floor >= n - K(1 - emin), which gives
// both an iteration bound and a sound per-layer clamp T[k] = base + k*emin
// (discarded content can only re-enter above the clamp).
inline int neg_slope(const HSeries& y) {
  int emin = 0;
  for (int k = 1; k <= y.N; ++k)
    if (!y.c[k].empty()) emin = std::min(emin, y.c[k].begin()->first);
  return emin;
}

inline int loop_target(const HSeries& y) {
  int wmax = 24;
  for (int k = 0; k <= y.N; ++k)
    if (y.hi[k] < Z_INF && y.hi[k] > Z_NONE) wmax = std::max(wmax, y.hi[k]);
  return wmax;
}

inline void clamp_hi_sloped(HSeries& a, int base, int emin) {
  for (int k = 0; k <= a.N; ++k)
    a.hi[k] = std::min(a.hi[k], base + k * emin);
  a.prune();
}

// Requires every hbar^0 monomial of y to carry z-exponent >= 1 (so powers of y
// eventually leave every certified window).
inline void require_small(const HSeries& y, const char* who) {
  if (y.logz != 0)
    throw std::domain_error(std::string(who) + ": log marker in argument");
  for (auto& [e, a] : y.c[0])
    if (a != 0 && e < 1)
      throw std::domain_error(std::string(who) +
                              ": argument not topologically small");
}

inline HSeries hs_exp(const HSeries& y) {
  require_small(y, "hs_exp");
  // split off the monomials with nonpositive z-exponent; they all carry at
  // least one power of hbar, so their exponential is a finite sum
  HSeries yneg(y.N), ypos(y.N);
  for (int k = 0; k <= y.N; ++k) {
    yneg.hi[k] = ypos.hi[k] = y.hi[k];
    for (auto& [e, a] : y.c[k]) (e <= 0 ? yneg : ypos).c[k][e] = a;
  }
  HSeries acc = HSeries::one(y.N);
  {
    HSeries pw = HSeries::one(y.N);
    for (int n = 1; n <= y.N; ++n) {
      pw = pw * yneg;
      if (pw.is_zero()) break;
      acc = acc + Rat(1) / factorial(n) * pw;
    }
  }
  // the z-positive part climbs in z-degree by at least one per factor
  int target = loop_target(y);
  HSeries acc2 = HSeries::one(y.N);
  HSeries pw = HSeries::one(y.N);
  for (int n = 1; n <= target + 1; ++n) {
    pw = pw * ypos;
    clamp_hi_sloped(pw, target, 0);
    if (pw.is_zero()) break;
    acc2 = acc2 + Rat(1) / factorial(n) * pw;
  }
  if (!pw.is_zero()) clamp_hi_sloped(acc2, target, 0);
  return acc * acc2;
}

// log of x = z^v (1 + y): leading coefficient must be 1; the result carries
// v * log z as a marker plus log(1 + y).
inline HSeries hs_log(const HSeries& x) {
  if (x.logz != 0) throw std::domain_error("hs_log: log marker in argument");
  int v = Z_INF;
  Rat lead;
  for (auto& [e, a] : x.c[0])
    if (a != 0) { v = e; lead = a; break; }
  if (v >= Z_INF) throw std::domain_error("hs_log: zero hbar^0 layer");
  if (lead != 1) throw std::domain_error("hs_log: leading coefficient must be 1");
  HSeries y = mul_z_pow(x, -v) - HSeries::one(x.N);
  require_small(y, "hs_log");
  int target = loop_target(y), emin = neg_slope(y);
  int nb = target + y.N * (1 - emin) + 2;
  HSeries acc = HSeries::zero(x.N);
  HSeries pw = HSeries::one(x.N);
  for (int n = 1; n <= nb; ++n) {
    pw = pw * y;
    clamp_hi_sloped(pw, target, emin);
    if (pw.is_zero()) break;
    acc = acc + Rat((n % 2) ? 1 : -1, n) * pw;
  }
  if (!pw.is_zero()) clamp_hi_sloped(acc, target, emin);
  acc.logz = v;
  return acc;
}

inline HSeries hs_sqrt(const HSeries& x) {
  if (x.logz != 0) throw std::domain_error("hs_sqrt: log marker in argument");
  HSeries y = x - HSeries::one(x.N);
  require_small(y, "hs_sqrt");
  int target = loop_target(y), emin = neg_slope(y);
  int nb = target + y.N * (1 - emin) + 2;
  HSeries acc = HSeries::one(x.N);
  HSeries pw = HSeries::one(x.N);
  for (int n = 1; n <= nb; ++n) {
    pw = pw * y;
    clamp_hi_sloped(pw, target, emin);
    if (pw.is_zero()) break;
    acc = acc + binom_rat(Rat(1, 2), n) * pw;
  }
  if (!pw.is_zero()) clamp_hi_sloped(acc, target, emin);
  return acc;
}

inline HSeries hs_invert(const HSeries& x) {
  if (x.logz != 0) throw std::domain_error("hs_invert: log marker in argument");
  int v = Z_INF;
  Rat lead;
  for (auto& [e, a] : x.c[0])
    if (a != 0) { v = e; lead = a; break; }
  if (v >= Z_INF) throw std::domain_error("hs_invert: zero hbar^0 layer");
  HSeries y = Rat(1) / lead * mul_z_pow(x, -v) - HSeries::one(x.N);
  require_small(y, "hs_invert");
  int target = loop_target(y), emin = neg_slope(y);
  int nb = target + y.N * (1 - emin) + 2;
  HSeries acc = HSeries::one(x.N);
  HSeries pw = HSeries::one(x.N);
  for (int n = 1; n <= nb; ++n) {
    pw = pw * (-y);
    clamp_hi_sloped(pw, target, emin);
    if (pw.is_zero()) break;
    acc = acc + pw;
  }
  if (!pw.is_zero()) clamp_hi_sloped(acc, target, emin);
  return Rat(1) / lead * mul_z_pow(acc, -v);
}

inline HSeries hs_pow_int(const HSeries& x, long n) {
  if (n < 0) return hs_pow_int(hs_invert(x), -n);
  HSeries acc = HSeries::one(x.N);
  for (long k = 0; k < n; ++k) acc = acc * x;
  return acc;
}

// Exponentiate back a log-type series with integer log z marker.
inline HSeries hs_exp_log(const HSeries& L) {
  long v = rat_to_long(L.logz, "hs_exp_log marker");
  HSeries s = L;
  s.logz = 0;
  return mul_z_pow(hs_exp(s), (int)v);
}

// P^{g(q)} for a base P with invertible leading term: the product of the
// g-indexed shifts of P and of P^{-1}.  Coefficients of g must be integers.
inline HSeries pow_gq(const HSeries& P, const QExp& g) {
  HSeries Pinv;
  bool have_inv = false;
  HSeries acc = HSeries::one(P.N);
  for (auto& [m, a] : g.c) {
    long cnt = rat_to_long(a, "pow_gq weight");
    if (cnt == 0) continue;
    if (cnt < 0 && !have_inv) {
      Pinv = hs_invert(P);
      have_inv = true;
    }
    HSeries base = shift_z(cnt > 0 ? P : Pinv, m);
    for (long t = 0; t < (cnt < 0 ? -cnt : cnt); ++t) acc = acc * base;
  }
  return acc;
}

// Coefficient of z^e across layers, as an hbar-series; the cap stops at the
// first layer whose window does not reach e.
inline QSeries coeff_z(const HSeries& x, int e) {
  if (x.logz != 0 && e == 0)
    throw std::domain_error("coeff_z: log marker present");
  int cap = -1;
  for (int k = 0; k <= x.N; ++k) {
    if (x.hi[k] < e) break;
    cap = k;
  }
  if (cap < 0) throw std::domain_error("coeff_z: no certified layer");
  QSeries r(cap);
  r.val = 0;
  r.a.assign(cap + 1, Rat(0));
  for (int k = 0; k <= cap; ++k) r.a[k] = x.at(k, e);
  r.normalize();
  return r;
}

inline QSeries residue(const HSeries& x) { return coeff_z(x, -1); }

// Substitute z := c * hbar and re-expand in hbar.  Layers above N are treated
// as absent, which is exact for the pure hbar^0 constructions this is used on.
// Poles turn into negative hbar powers; c = 0 is rejected when poles exist.
inline QSeries eval_at_hbar(const HSeries& x, const Rat& cpt) {
  if (x.logz != 0) throw std::domain_error("eval_at_hbar: log marker present");
  long cap = Z_INF;
  long maxdeg = 0;
  for (int k = 0; k <= x.N; ++k) {
    if (x.hi[k] < Z_INF) cap = std::min(cap, (long)k + x.hi[k]);
    for (auto& [e, a] : x.c[k]) maxdeg = std::max(maxdeg, (long)k + e);
  }
  if (cap >= Z_INF) cap = maxdeg;  // exact Laurent polynomial
  std::map<int, Rat> acc;
  int lo = 0;
  for (int k = 0; k <= x.N; ++k)
    for (auto& [e, a] : x.c[k]) {
      if (e < 0 && cpt == 0)
        throw std::domain_error("eval_at_hbar: pole at z = 0");
      long t = k + e;
      if (t > cap) continue;
      Rat term = a * (cpt == 0 ? Rat(e == 0 ? 1 : 0) : rat_pow(cpt, e));
      if (term == 0) continue;
      acc[(int)t] += term;
      lo = std::min(lo, (int)t);
    }
  QSeries r((int)cap);
  r.val = lo;
  if (cap >= lo) {
    r.a.assign(cap - lo + 1, Rat(0));
    for (auto& [t, v] : acc) r.a[t - lo] = v;
  }
  r.normalize();
  return r;
}

// Split into strictly singular part (z-exponents < 0) and the rest.  The log
// marker, if any, travels with the singular part.
inline std::pair<HSeries, HSeries> split_sing(const HSeries& x) {
  HSeries s(x.N), r(x.N);
  s.logz = x.logz;
  for (int k = 0; k <= x.N; ++k) {
    s.hi[k] = r.hi[k] = x.hi[k];
    for (auto& [e, a] : x.c[k]) (e < 0 ? s : r).c[k][e] = a;
  }
  return {s, r};
}

// Equality on the intersection of certified regions; returns false as soon as
// a commonly certified coefficient differs.  `min_window` guards against
// vacuously-true comparisons: every layer's common ceiling must reach it.
inline bool hs_eq(const HSeries& x, const HSeries& y, int min_window = Z_NONE) {
  if (x.logz != y.logz) return false;
  int N = std::min(x.N, y.N);
  for (int k = 0; k <= N; ++k) {
    int h = std::min(x.hi[k], y.hi[k]);
    if (h < min_window) return false;
    for (auto& [e, a] : x.c[k])
      if (e <= h && a != y.at(k, e)) return false;
    for (auto& [e, a] : y.c[k])
      if (e <= h && a != x.at(k, e)) return false;
  }
  return true;
}

// -----------------------------------------------------------------------------
// Base series.
// -----------------------------------------------------------------------------

// f(z) = e^{z/2} - e^{-z/2} = sum_{n>=0} z^{2n+1} / (4^n (2n+1)!), stored
// through z^zhi in the hbar^0 layer (higher layers exactly zero).
inline HSeries hs_f(int N, int zhi) {
  HSeries s(N);
  s.hi[0] = zhi;
  Rat pw(1);
  for (int n = 0; 2 * n + 1 <= zhi; ++n) {
    s.c[0][2 * n + 1] = pw / factorial(2 * n + 1);
    pw /= 4;
  }
  return s;
}

// f0(z) = f(z)/z.
inline HSeries hs_f0(int N, int zhi) { return mul_z_pow(hs_f(N, zhi + 1), -1); }

inline HSeries hs_log_f(int N, int zhi) { return hs_log(hs_f(N, zhi)); }
inline HSeries hs_dlog_f(int N, int zhi) { return derive(hs_log_f(N, zhi + 1)); }
inline HSeries hs_d2log_f(int N, int zhi) {
  return derive(derive(hs_log_f(N, zhi + 2)));
}

}  // namespace qva
