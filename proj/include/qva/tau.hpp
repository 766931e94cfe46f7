#pragma once

#include <string>
#include <vector>

#include "qva/cartan.hpp"
#include "qva/hseries.hpp"

namespace qva {

// Deformation tuple: for each generator pair (i,j) one additive scalar for the
// h-h channel, additive scalars for the h-x channels (two orientations, two
// signs), and multiplicative units for the four x-x channels.
struct TauElement {
  int n = 0;  // rank
  int N = 0;  // hbar truncation
  // flattened (i,j) -> i*n + j
  std::vector<HSeries> t;                      // h-h
  std::vector<HSeries> t1[2], t2[2];           // h-x, index 0 = "+", 1 = "-"
  std::vector<HSeries> e[2][2];                // x-x, [e1][e2], 0 = "+", 1 = "-"

  TauElement() = default;
  TauElement(int n_, int N_) : n(n_), N(N_) {
    int sz = n * n;
    t.assign(sz, HSeries::zero(N));
    for (int s = 0; s < 2; ++s) {
      t1[s].assign(sz, HSeries::zero(N));
      t2[s].assign(sz, HSeries::zero(N));
      for (int s2 = 0; s2 < 2; ++s2) e[s][s2].assign(sz, HSeries::one(N));
    }
  }

  int idx(int i, int j) const { return i * n + j; }
};

inline TauElement tau_eps(int n, int N) { return TauElement(n, N); }

inline TauElement tau_mul(const TauElement& x, const TauElement& y) {
  if (x.n != y.n) throw std::domain_error("tau_mul: mismatched rank");
  TauElement r(x.n, std::min(x.N, y.N));
  for (int k = 0; k < x.n * x.n; ++k) {
    r.t[k] = x.t[k] + y.t[k];
    for (int s = 0; s < 2; ++s) {
      r.t1[s][k] = x.t1[s][k] + y.t1[s][k];
      r.t2[s][k] = x.t2[s][k] + y.t2[s][k];
      for (int s2 = 0; s2 < 2; ++s2)
        r.e[s][s2][k] = x.e[s][s2][k] * y.e[s][s2][k];
    }
  }
  return r;
}

inline TauElement tau_inv(const TauElement& x) {
  TauElement r(x.n, x.N);
  for (int k = 0; k < x.n * x.n; ++k) {
    r.t[k] = -x.t[k];
    for (int s = 0; s < 2; ++s) {
      r.t1[s][k] = -x.t1[s][k];
      r.t2[s][k] = -x.t2[s][k];
      for (int s2 = 0; s2 < 2; ++s2) r.e[s][s2][k] = hs_invert(x.e[s][s2][k]);
    }
  }
  return r;
}

namespace detail {
// hbar^0 layers of a and of b(-z) agree on the common window
inline bool layer0_matches_reflected(const HSeries& a, const HSeries& b) {
  if (a.logz != 0 || b.logz != 0) return false;
  int h = std::min(a.hi[0], b.hi[0]);
  for (auto& [e, c] : a.c[0])
    if (e <= h && c != ((e % 2) ? -b.at(0, e) : b.at(0, e))) return false;
  for (auto& [e, c] : b.c[0])
    if (e <= h && a.at(0, e) != ((e % 2) ? -c : c)) return false;
  return true;
}

// hbar^0 layer is a unit of the formal power series ring: no poles, nonzero
// constant term
inline bool layer0_is_unit(const HSeries& a) {
  if (a.at(0, 0) == 0) return false;
  for (auto& [e, c] : a.c[0])
    if (e < 0 && c != 0) return false;
  return true;
}
}  // namespace detail

// Membership: the classical (hbar = 0) layers must satisfy the reflection
// symmetries of the deformation group, and the x-x units must be invertible
// power series.
inline bool tau_is_member(const TauElement& x) {
  auto neg = [](const HSeries& s) { return Rat(-1) * s; };
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      int ij = x.idx(i, j), ji = x.idx(j, i);
      if (!detail::layer0_matches_reflected(x.t[ij], x.t[ji])) return false;
      for (int s = 0; s < 2; ++s)
        if (!detail::layer0_matches_reflected(x.t1[s][ij], neg(x.t2[s][ji])))
          return false;
      for (int s = 0; s < 2; ++s)
        for (int s2 = 0; s2 < 2; ++s2) {
          if (!detail::layer0_matches_reflected(x.e[s][s2][ij], x.e[s2][s][ji]))
            return false;
          if (!detail::layer0_is_unit(x.e[s][s2][ij])) return false;
        }
    }
  return true;
}

// -----------------------------------------------------------------------------
// The distinguished level-l deformation element.
// -----------------------------------------------------------------------------
//
//  W is the z-window the hbar^0 base series are built with; downstream windows
//  shrink from there through derivatives and operator application.
inline TauElement wh_ell(const CartanDatum& d, const Rat& ell, int N, int W) {
  TauElement r(d.n, N);
  Rat rl = Rat(d.r) * ell;
  HSeries dlog = hs_dlog_f(N, W + 2);
  HSeries d2log = hs_d2log_f(N, W + 2);
  HSeries f = hs_f(N, W + 2);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      int ij = r.idx(i, j);
      Rat nij = Rat(d.b(i, j));  // r_i a_ij
      // h-h channel
      OpSeries opA = OpSeries::qbracket(nij, N) * OpSeries::qbracket(rl, N) *
                     OpSeries::shift(rl, N);
      r.t[ij] = -apply_op(opA, d2log) -
                HSeries::monomial(N, -2, 0, nij * rl);
      // h-x channels (sign-independent here)
      OpSeries opB = OpSeries::qbracket(nij, N) * OpSeries::shift(rl, N);
      HSeries hx = apply_op(opB, dlog) - HSeries::monomial(N, -1, 0, nij);
      Rat nji = Rat(d.b(j, i));
      OpSeries opB2 = OpSeries::qbracket(nji, N) * OpSeries::shift(rl, N);
      HSeries hx2 = apply_op(opB2, dlog) - HSeries::monomial(N, -1, 0, nji);
      for (int s = 0; s < 2; ++s) {
        r.t1[s][ij] = hx;
        r.t2[s][ij] = hx2;  // from the (j,i) formula read at (i,j)
      }
      // x-x channels
      HSeries same_sign;
      if (d.a(i, j) > 0) {
        QExp g;
        g.add_term(Rat(-d.ri[i] * d.A[i][i]), Rat(1));
        g.add_term(Rat(0), Rat(-1));
        same_sign = pow_gq(f, g);
      } else {
        same_sign = mul_z_pow(shift_z(f, -nij), -1);
      }
      r.e[0][0][ij] = r.e[1][1][ij] = same_sign;
      if (i == j) {
        r.e[0][1][ij] = mul_z_pow(HSeries::z_plus(N, 2 * rl), -1);
      } else {
        r.e[0][1][ij] = HSeries::one(N);
      }
      QExp gmp;
      gmp.add_term(nij, Rat(1));
      gmp.add_term(-nij, Rat(-1));
      HSeries fpart = pow_gq(f, gmp);
      if (i == j)
        r.e[1][0][ij] = mul_z_pow(HSeries::z_plus(N, -2 * rl), -1) * fpart;
      else
        r.e[1][0][ij] = fpart;
    }
  return r;
}

// -----------------------------------------------------------------------------
// The cross-level twisting element for an ordered pair of levels (l, l').
// -----------------------------------------------------------------------------
inline TauElement wh_pair(const CartanDatum& d, const Rat& ell, const Rat& ellp,
                          int N, int W) {
  TauElement r(d.n, N);
  Rat rl = Rat(d.r) * ell, rlp = Rat(d.r) * ellp;
  HSeries dlog = hs_dlog_f(N, W + 2);
  HSeries d2log = hs_d2log_f(N, W + 2);
  HSeries f = hs_f(N, W + 2);
  OpSeries qm1_minus_q =
      op_sub(OpSeries::shift(Rat(-1), N), OpSeries::shift(Rat(1), N));
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      int ij = r.idx(i, j);
      Rat nij = Rat(d.b(i, j)), nji = Rat(d.b(j, i));
      OpSeries opA = OpSeries::qbracket(nij, N) * OpSeries::qbracket(rl, N) *
                     OpSeries::qbracket(rlp, N) * qm1_minus_q;
      r.t[ij] = apply_op(opA, d2log);
      OpSeries op1 = OpSeries::qbracket(nij, N) * OpSeries::qbracket(rlp, N) *
                     (Rat(-1) * qm1_minus_q);
      OpSeries op2 = OpSeries::qbracket(nji, N) * OpSeries::qbracket(rl, N) *
                     (Rat(-1) * qm1_minus_q);
      HSeries v1 = apply_op(op1, dlog), v2 = apply_op(op2, dlog);
      for (int s = 0; s < 2; ++s) {
        r.t1[s][ij] = v1;
        r.t2[s][ij] = v2;
      }
      long nn = d.b(i, j);
      for (int s = 0; s < 2; ++s)
        for (int s2 = 0; s2 < 2; ++s2) {
          long eps = (s == s2) ? 1 : -1;  // epsilon1 * epsilon2
          QExp g;
          g.add_term(Rat(-eps * nn), Rat(1));
          g.add_term(Rat(eps * nn), Rat(-1));
          r.e[s][s2][ij] = pow_gq(f, g);
        }
    }
  return r;
}

// -----------------------------------------------------------------------------
// The four smoothing identities tying the cross-level components together:
// the h-h component smoothed by 2 hbar f0(2 hbar d/dz) matches shifted
// differences of the h-x components, and those in turn smooth to twisted
// powers of log f.
// -----------------------------------------------------------------------------
struct Tech1Report {
  bool pass = true;
  std::vector<std::string> failures;
  int min_hbar = 0;   // weakest certified hbar order among comparisons
  int min_window = 0; // weakest certified z-ceiling among comparisons

  void note(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

// Full-order reflection between a cross-level element and its level-reversed
// partner: additive h-h channels are odd under (z, i, j) -> (-z, j, i) with the
// levels swapped, the h-x channels exchange kinds, and the multiplicative
// channels pair to 1.  This is the scalar shadow of braiding unitarity and
// holds exactly at every hbar order, so it doubles as a corruption detector
// for components the smoothing identities do not touch.
inline Tech1Report check_reflection(const TauElement& x, const TauElement& y,
                                    int min_window = 0) {
  Tech1Report rep;
  rep.min_window = min_window;
  if (x.n != y.n || x.N != y.N)
    throw std::domain_error("check_reflection: mismatched shapes");
  rep.min_hbar = x.N;
  HSeries one = HSeries::one(x.N);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      int ij = x.idx(i, j), ji = x.idx(j, i);
      std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      rep.note(hs_eq(x.t[ij], Rat(-1) * subst_neg(y.t[ji]), min_window),
               "reflect-hh " + tag);
      for (int s = 0; s < 2; ++s) {
        rep.note(hs_eq(x.t1[s][ij], subst_neg(y.t2[s][ji]), min_window),
                 "reflect-hx-first " + tag);
        rep.note(hs_eq(x.t2[s][ij], subst_neg(y.t1[s][ji]), min_window),
                 "reflect-hx-second " + tag);
        for (int s2 = 0; s2 < 2; ++s2)
          rep.note(hs_eq(x.e[s][s2][ij] * subst_neg(y.e[s2][s][ji]), one,
                         min_window),
                   "reflect-xx " + tag);
      }
    }
  return rep;
}

inline Tech1Report check_tech1(const CartanDatum& d, const Rat& ell,
                               const Rat& ellp, const TauElement& tau, int N,
                               int W, int min_window = 0) {
  Tech1Report rep;
  rep.min_hbar = N;
  rep.min_window = min_window;
  Rat rl = Rat(d.r) * ell, rlp = Rat(d.r) * ellp;
  HSeries logf = hs_log_f(N, W + 2);
  OpSeries smooth = OpSeries(1, Rat(2) * f0_eval(Rat(2), N));
  auto diff_shift = [&](const Rat& c) {
    return op_sub(OpSeries::shift(-c, N), OpSeries::shift(c, N));
  };
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      int ij = tau.idx(i, j);
      std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      HSeries lhs = apply_op(smooth, tau.t[ij]);
      rep.note(hs_eq(lhs, apply_op(diff_shift(rl), tau.t1[0][ij]), min_window),
               "hh-vs-hx-first " + tag);
      rep.note(hs_eq(lhs, apply_op(diff_shift(rlp), tau.t2[0][ij]), min_window),
               "hh-vs-hx-second " + tag);
      long nn = d.b(i, j);
      auto logf_pow = [&](const Rat& c) {
        // (q^n - q^-n)(q^c - q^-c) acting on log f
        OpSeries a = op_sub(OpSeries::shift(Rat(nn), N),
                            OpSeries::shift(Rat(-nn), N));
        OpSeries b = op_sub(OpSeries::shift(c, N), OpSeries::shift(-c, N));
        return apply_op(a * b, logf);
      };
      for (int s = 0; s < 2; ++s) {
        rep.note(hs_eq(apply_op(smooth, tau.t1[s][ij]), logf_pow(rlp), min_window),
                 "hx-first-smooth " + tag);
        rep.note(hs_eq(apply_op(smooth, tau.t2[s][ij]), logf_pow(rl), min_window),
                 "hx-second-smooth " + tag);
      }
    }
  return rep;
}

}  // namespace qva
