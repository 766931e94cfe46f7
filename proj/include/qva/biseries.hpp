#pragma once

#include <map>

#include "qva/hseries.hpp"

namespace qva {

// Expansion-region tags for series in two variables.  R12 means the region
// where the first variable dominates (expansions in nonnegative powers of the
// second variable), R21 the opposite.  Values combine by intersection; ANY is
// the tag of series regular enough to live in both.
enum BiRegion : int { BR_NONE = 0, BR_12 = 1, BR_21 = 2, BR_ANY = 3 };

// A series in a primary variable x and a secondary variable y:
//   sum_{m <= w_cap} y^m * t[m](x),
// with t[m] an HSeries in x.  Certified through y^{w_cap}; absent keys below
// the cap are exact zeros.  Under R12, (x, y) = (z1, z2); under R21 the roles
// are swapped.
struct BiSeries {
  int N = 0;
  int region = BR_ANY;
  int w_cap = Z_INF;
  std::map<int, HSeries> t;

  BiSeries() = default;
  explicit BiSeries(int N_, int region_ = BR_ANY, int w_cap_ = Z_INF)
      : N(N_), region(region_), w_cap(w_cap_) {}

  static BiSeries zero(int N, int region = BR_ANY) { return BiSeries(N, region); }

  HSeries get(int m) const {
    auto it = t.find(m);
    return it != t.end() ? it->second : HSeries::zero(N);
  }

  int floor_w() const {
    for (auto& [m, s] : t)
      if (!s.is_zero()) return m;
    return w_cap >= Z_INF ? Z_INF : w_cap + 1;
  }

  void prune() {
    for (auto it = t.begin(); it != t.end();) {
      if (it->first > w_cap || it->second.is_zero())
        it = t.erase(it);
      else
        ++it;
    }
  }

  bool is_zero() const {
    for (auto& [m, s] : t)
      if (!s.is_zero()) return false;
    return true;
  }
};

inline int bi_region_meet(int a, int b) {
  int r = a & b;
  if (r == BR_NONE)
    throw std::domain_error("BiSeries: incompatible expansion regions");
  return r;
}

inline BiSeries operator+(const BiSeries& x, const BiSeries& y) {
  BiSeries r(std::min(x.N, y.N), bi_region_meet(x.region, y.region),
             std::min(x.w_cap, y.w_cap));
  for (auto& [m, s] : x.t)
    if (m <= r.w_cap) r.t[m] = s;
  for (auto& [m, s] : y.t) {
    if (m > r.w_cap) continue;
    auto it = r.t.find(m);
    if (it == r.t.end())
      r.t[m] = s;
    else
      it->second = it->second + s;
  }
  r.prune();
  return r;
}

inline BiSeries operator*(const Rat& c, const BiSeries& x) {
  BiSeries r = x;
  for (auto& [m, s] : r.t) s = c * s;
  r.prune();
  return r;
}

inline BiSeries operator-(const BiSeries& x) { return Rat(-1) * x; }
inline BiSeries operator-(const BiSeries& x, const BiSeries& y) { return x + (-y); }

inline BiSeries operator*(const BiSeries& x, const BiSeries& y) {
  long fx = x.floor_w(), fy = y.floor_w();
  long capl = std::min((long)x.w_cap + fy, (long)y.w_cap + fx);
  BiSeries r(std::min(x.N, y.N), bi_region_meet(x.region, y.region),
             (int)std::max((long)Z_NONE, std::min((long)Z_INF, capl)));
  for (auto& [m1, s1] : x.t)
    for (auto& [m2, s2] : y.t) {
      int m = m1 + m2;
      if (m > r.w_cap) continue;
      HSeries p = s1 * s2;
      auto it = r.t.find(m);
      if (it == r.t.end())
        r.t[m] = p;
      else
        it->second = it->second + p;
    }
  r.prune();
  return r;
}

// Multiply by y^m.
inline BiSeries mul_w_pow(const BiSeries& x, int m) {
  BiSeries r(x.N, x.region,
             x.w_cap >= Z_INF ? Z_INF : x.w_cap + m);
  for (auto& [k, s] : x.t) r.t[k + m] = s;
  return r;
}

// A function of the primary variable alone.
inline BiSeries embed_primary(const HSeries& s, int region = BR_ANY) {
  BiSeries r(s.N, region);
  if (!s.is_zero()) r.t[0] = s;
  return r;
}

// A function of the secondary variable alone: its z-exponents become
// y-exponents; each coefficient is constant in the primary variable.  The
// secondary cap is the weakest layer window of the source.
inline BiSeries embed_secondary(const HSeries& s, int region = BR_ANY) {
  if (s.logz != 0)
    throw std::domain_error("embed_secondary: log marker present");
  int cap = Z_INF;
  for (int k = 0; k <= s.N; ++k) cap = std::min(cap, s.hi[k]);
  BiSeries r(s.N, region, cap);
  for (int k = 0; k <= s.N; ++k)
    for (auto& [e, a] : s.c[k]) {
      if (e > cap) continue;
      auto it = r.t.find(e);
      if (it == r.t.end()) it = r.t.emplace(e, HSeries::zero(s.N)).first;
      it->second.set(k, 0, it->second.at(k, 0) + a);
    }
  r.prune();
  return r;
}

enum class BiMode { Diff12, Diff21, Sum12 };

// Expand s at a two-variable argument:
//   Diff12: s(z1 - z2) in the region |z1| > |z2|  (primary z1, tag R12)
//   Diff21: s(z1 - z2) in the region |z2| > |z1|  (primary z2, tag R21)
//   Sum12 : s(z1 + z2) in the region |z1| > |z2|  (primary z1, tag R12)
// Uses the Taylor expansion in the secondary variable through y^{w_cap}.
inline BiSeries expand_region(const HSeries& s, BiMode mode, int w_cap) {
  if (s.logz != 0)
    throw std::domain_error("expand_region: log marker present");
  int region = (mode == BiMode::Diff21) ? BR_21 : BR_12;
  BiSeries r(s.N, region, w_cap);
  HSeries d = s;
  Rat invfact(1);
  for (int m = 0; m <= w_cap; ++m) {
    if (m > 0) {
      d = derive(d);
      invfact /= m;
    }
    HSeries coef;
    switch (mode) {
      case BiMode::Diff12:
        coef = ((m % 2) ? Rat(-1) : Rat(1)) * invfact * d;
        break;
      case BiMode::Sum12:
        coef = invfact * d;
        break;
      case BiMode::Diff21:
        coef = invfact * subst_neg(d);
        break;
    }
    if (!coef.is_zero()) r.t[m] = coef;
  }
  return r;
}

// Equality on the common certified window; `min_w` and `min_z` guard against
// vacuous agreement (every compared entry must be certified at least that far).
inline bool bs_eq(const BiSeries& x, const BiSeries& y, int min_w = Z_NONE,
                  int min_z = Z_NONE) {
  bi_region_meet(x.region, y.region);
  int cap = std::min(x.w_cap, y.w_cap);
  if (cap < min_w) return false;
  std::map<int, char> keys;
  for (auto& [m, s] : x.t) keys[m] = 1;
  for (auto& [m, s] : y.t) keys[m] = 1;
  for (auto& [m, unused] : keys) {
    if (m > cap) break;
    if (!hs_eq(x.get(m), y.get(m), min_z)) return false;
  }
  return true;
}

}  // namespace qva
