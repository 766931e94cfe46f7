#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qva/biseries.hpp"
#include "qva/cartan.hpp"
#include "qva/tau.hpp"

namespace qva {

// =============================================================================
// Fock space over creation modes b_g(-m), m >= 1, of a family of Heisenberg
// generators indexed by g (a generator slot; tensor squares reuse the same
// machinery by letting g range over both factors).  States are finite linear
// combinations of sorted creation monomials applied to the vacuum.
// =============================================================================

struct FockMono {
  // (generator index, mode m >= 1), kept sorted
  std::vector<std::pair<int, int>> f;

  int degree() const {
    int d = 0;
    for (auto& [g, m] : f) d += m;
    return d;
  }

  std::string key() const {
    std::string s;
    for (auto& [g, m] : f) {
      s += std::to_string(g);
      s += ':';
      s += std::to_string(m);
      s += ',';
    }
    return s;
  }

  FockMono with(int g, int m) const {
    FockMono r = *this;
    auto it = std::lower_bound(r.f.begin(), r.f.end(), std::make_pair(g, m));
    r.f.insert(it, {g, m});
    return r;
  }

  FockMono without(size_t pos) const {
    FockMono r = *this;
    r.f.erase(r.f.begin() + pos);
    return r;
  }
};

template <class C>
struct FVec {
  std::map<std::string, std::pair<FockMono, C>> t;

  static FVec vacuum(const C& one) {
    FVec v;
    v.t.emplace(FockMono{}.key(), std::make_pair(FockMono{}, one));
    return v;
  }

  void add(const FockMono& m, const C& c) {
    if (c.is_zero()) return;
    auto [it, ins] = t.try_emplace(m.key(), std::make_pair(m, c));
    if (!ins) {
      it->second.second = it->second.second + c;
      if (it->second.second.is_zero()) t.erase(it);
    }
  }

  bool is_zero() const {
    for (auto& [k, mc] : t)
      if (!mc.second.is_zero()) return false;
    return true;
  }
};

template <class C>
FVec<C> operator+(const FVec<C>& x, const FVec<C>& y) {
  FVec<C> r = x;
  for (auto& [k, mc] : y.t) r.add(mc.first, mc.second);
  return r;
}

template <class C>
FVec<C> operator-(const FVec<C>& x, const FVec<C>& y) {
  FVec<C> r = x;
  for (auto& [k, mc] : y.t) r.add(mc.first, Rat(-1) * mc.second);
  return r;
}

template <class C>
FVec<C> fv_scale(const C& s, const FVec<C>& x) {
  FVec<C> r;
  for (auto& [k, mc] : x.t) r.add(mc.first, s * mc.second);
  return r;
}

template <class C>
FVec<C> fv_scale(const Rat& s, const FVec<C>& x) {
  FVec<C> r;
  for (auto& [k, mc] : x.t) r.add(mc.first, s * mc.second);
  return r;
}

// Coefficient-wise equality over the union of monomials; the `cmp` functor
// receives (coefficient, coefficient) with absent entries replaced by zero.
template <class C, class Cmp>
bool fv_eq_with(const FVec<C>& x, const FVec<C>& y, const C& zero, Cmp cmp) {
  for (auto& [k, mc] : x.t) {
    auto it = y.t.find(k);
    if (!cmp(mc.second, it == y.t.end() ? zero : it->second.second))
      return false;
  }
  for (auto& [k, mc] : y.t)
    if (x.t.find(k) == x.t.end() && !cmp(zero, mc.second)) return false;
  return true;
}

inline bool fv_eq(const FVec<QSeries>& x, const FVec<QSeries>& y, int cap) {
  return fv_eq_with(x, y, QSeries::zero(cap),
                    [](const QSeries& a, const QSeries& b) { return qs_eq(a, b); });
}

inline bool fv_eq(const FVec<HSeries>& x, const FVec<HSeries>& y, int N,
                  int min_window) {
  return fv_eq_with(x, y, HSeries::zero(N),
                    [&](const HSeries& a, const HSeries& b) {
                      return hs_eq(a, b, min_window);
                    });
}

inline bool fv_eq(const FVec<BiSeries>& x, const FVec<BiSeries>& y, int N,
                  int min_w, int min_z) {
  return fv_eq_with(x, y, BiSeries::zero(N),
                    [&](const BiSeries& a, const BiSeries& b) {
                      return bs_eq(a, b, min_w, min_z);
                    });
}

// -----------------------------------------------------------------------------
// Linear fields: a creation part (adds one mode) plus a removal part (strips
// one matching creation factor against a scalar).  Removal parts commute among
// themselves, so truncated exponentials are unambiguous.
// -----------------------------------------------------------------------------
template <class C>
struct GenField {
  std::map<std::pair<int, int>, C> cre;  // add b_g(-m) weighted by coefficient
  std::map<std::pair<int, int>, C> rem;  // strip one b_g(-m) factor
};

template <class C>
GenField<C> gf_add(const GenField<C>& x, const GenField<C>& y) {
  GenField<C> r = x;
  for (auto& [gm, c] : y.cre) {
    auto [it, ins] = r.cre.try_emplace(gm, c);
    if (!ins) it->second = it->second + c;
  }
  for (auto& [gm, c] : y.rem) {
    auto [it, ins] = r.rem.try_emplace(gm, c);
    if (!ins) it->second = it->second + c;
  }
  return r;
}

// QSeries scalars widen their certified cap when multiplied by hbar-divisible
// factors; inside a fixed-order computation that would keep formally nonzero
// tails alive forever, so products get clamped back to the working order.
inline void clamp_cap(QSeries& c, int cap) {
  if (cap >= 0 && c.cap > cap) {
    c.cap = cap;
    c.normalize();
  }
}
inline void clamp_cap(HSeries&, int) {}
inline void clamp_cap(BiSeries&, int) {}

template <class C>
FVec<C> apply_gen(const GenField<C>& F, const FVec<C>& v, int hbar_cap = -1) {
  FVec<C> r;
  for (auto& [k, mc] : v.t) {
    const FockMono& mono = mc.first;
    const C& coef = mc.second;
    for (auto& [gm, c] : F.cre) {
      C p = c * coef;
      clamp_cap(p, hbar_cap);
      if (!p.is_zero()) r.add(mono.with(gm.first, gm.second), p);
    }
    for (size_t p = 0; p < mono.f.size(); ++p) {
      auto it = F.rem.find(mono.f[p]);
      if (it == F.rem.end()) continue;
      C s = it->second * coef;
      clamp_cap(s, hbar_cap);
      if (!s.is_zero()) r.add(mono.without(p), s);
    }
  }
  return r;
}

// exp(F) v as a terminating sum: every field we exponentiate carries at least
// one power of hbar per application, so the series dies inside the truncation.
template <class C>
FVec<C> apply_exp(const GenField<C>& F, const FVec<C>& v, int hbar_cap = -1,
                  int kmax = 64) {
  FVec<C> acc = v;
  FVec<C> term = v;
  for (int k = 1; k <= kmax; ++k) {
    term = fv_scale(Rat(1, k), apply_gen(F, term, hbar_cap));
    if (term.is_zero()) return acc;
    acc = acc + term;
  }
  throw std::domain_error("apply_exp: exponential did not terminate");
}

// The canonical derivation: [der, b_g(-m)] = m b_g(-m-1), der(vacuum) = 0.
template <class C>
FVec<C> act_derivation(const FVec<C>& v) {
  FVec<C> r;
  for (auto& [k, mc] : v.t)
    for (size_t p = 0; p < mc.first.f.size(); ++p) {
      auto [g, m] = mc.first.f[p];
      r.add(mc.first.without(p).with(g, m + 1), Rat(m) * mc.second);
    }
  return r;
}

// e^{c hbar der} on states with QSeries coefficients (finite: each der costs
// one hbar order).
inline FVec<QSeries> act_translate(const Rat& c, const FVec<QSeries>& v, int N) {
  FVec<QSeries> acc = v;
  FVec<QSeries> term = v;
  for (int k = 1; k <= N; ++k) {
    term = fv_scale(QSeries::hbar_pow(1, N, c / k), act_derivation(term));
    for (auto& [key, mc] : term.t) clamp_cap(mc.second, N);
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc;
}

struct FockReport {
  bool pass = true;
  std::vector<std::string> failures;
  int cases = 0;

  void note(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

// =============================================================================
// Mode brackets of the deformed Cartan currents.
//
// The current commutator kernel is a difference of two region expansions of a
// shifted double-log derivative.  Its double residues decompose exactly as a
// delta-supported diagonal (which stays classical: c_ij(m) = m r_i a_ij r l)
// plus off-diagonal corrections matching the deformation tuple's h-h
// components.  The diagonal is what the Heisenberg modes realize; the
// correction is carried by a separate lowering field in the current.
// =============================================================================
struct ModeAlgebra {
  CartanDatum d;
  Rat ell;
  int m_cap = 0;
  int N = 0;
  std::vector<QSeries> c;  // (i*n + j)*m_cap + (m-1)
  bool delta_supported = true;  // literal delta-support of the kernel residues

  QSeries cmode(int i, int j, int m) const {
    if (m == 0 || m > m_cap || m < -m_cap) return QSeries::zero(N);
    if (m < 0) return -cmode(j, i, -m);
    return c[(i * d.n + j) * m_cap + (m - 1)];
  }
};

namespace fock_detail {

// Double residue Res_{z1} Res_{z2} z1^m z2^n of iota_{12} G - iota_{21} H.
struct KernelResidues {
  BiSeries g12, h21;
  int N;
  QSeries at(int m, int n) const {
    QSeries r = QSeries::zero(N);
    if (n <= -1) {
      auto it = g12.t.find(-n - 1);
      if (it != g12.t.end()) r = r + coeff_z(it->second, -m - 1);
    }
    if (m <= -1) {
      auto it = h21.t.find(-m - 1);
      if (it != h21.t.end()) r = r - coeff_z(it->second, -n - 1);
    }
    return r;
  }
};

inline OpSeries opq_diff(const Rat& c, int N) {
  return op_sub(OpSeries::shift(c, N), OpSeries::shift(-c, N));
}

}  // namespace fock_detail

struct BracketScan {
  ModeAlgebra ma;
  FockReport rep;
};

inline BracketScan scan_brackets(const CartanDatum& d, const Rat& ell, int m_cap,
                                 int N) {
  BracketScan out;
  out.ma.d = d;
  out.ma.ell = ell;
  out.ma.m_cap = m_cap;
  out.ma.N = N;
  out.ma.c.assign((size_t)d.n * d.n * m_cap, QSeries::zero(N));
  Rat rl = Rat(d.r) * ell;
  int W0 = 2 * m_cap + N + 8;
  HSeries d2log = hs_d2log_f(N, W0);
  TauElement whl = wh_ell(d, ell, N, W0);
  int wcap = m_cap - 1;

  std::vector<fock_detail::KernelResidues> B(d.n * d.n), P(d.n * d.n);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      Rat nij = Rat(d.b(i, j));
      OpSeries op = OpSeries::qbracket(nij, N) * OpSeries::qbracket(rl, N);
      HSeries G = -apply_op(op * OpSeries::shift(rl, N), d2log);
      HSeries H = -apply_op(op * OpSeries::shift(-rl, N), d2log);
      B[i * d.n + j] = {expand_region(G, BiMode::Diff12, wcap),
                        expand_region(H, BiMode::Diff21, wcap), N};
      // predicted correction: the deformation tuple's h-h component paired
      // against creation halves of either current
      P[i * d.n + j] = {
          expand_region(whl.t[whl.idx(i, j)], BiMode::Diff12, wcap),
          expand_region(subst_neg(whl.t[whl.idx(j, i)]), BiMode::Diff21, wcap),
          N};
    }

  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      Rat nij = Rat(d.b(i, j));
      std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (int m = -m_cap; m <= m_cap; ++m)
        for (int n = -m_cap; n <= m_cap; ++n) {
          QSeries b = B[i * d.n + j].at(m, n);
          std::string mn =
              tag + " m=" + std::to_string(m) + " n=" + std::to_string(n);
          out.rep.note(qs_eq(b, -B[j * d.n + i].at(n, m)), "antisym " + mn);
          if (m + n == 0) {
            // diagonal: exactly the classical Heisenberg bracket
            out.rep.note(
                qs_eq(b, QSeries::from_rat(Rat(m) * nij * rl, N)),
                "diagonal-classical " + mn);
            out.rep.note(P[i * d.n + j].at(m, n).is_zero(),
                         "correction-off-diagonal " + mn);
            if (m > 0) out.ma.c[(i * d.n + j) * m_cap + (m - 1)] = b;
          } else {
            if (!b.is_zero()) out.ma.delta_supported = false;
            out.rep.note(b.at(0) == 0, "classical-delta " + mn);
            out.rep.note(qs_eq(b, P[i * d.n + j].at(m, n)),
                         "correction-match " + mn);
            if (m >= 0 && n >= 0)
              out.rep.note(b.is_zero(), "annihilation-pair " + mn);
          }
        }
    }
  return out;
}

inline ModeAlgebra derive_brackets(const CartanDatum& d, const Rat& ell,
                                   int m_cap, int N) {
  BracketScan s = scan_brackets(d, ell, m_cap, N);
  if (!s.rep.pass)
    throw std::domain_error("derive_brackets: " + s.rep.failures.front());
  return s.ma;
}

inline FockReport check_brackets(const CartanDatum& d, const Rat& ell, int m_cap,
                                 int N) {
  return scan_brackets(d, ell, m_cap, N).rep;
}

// Two construction paths for the summed level agree.
inline FockReport check_bracket_additivity(const CartanDatum& d, const Rat& l1,
                                           const Rat& l2, int m_cap, int N) {
  FockReport rep;
  ModeAlgebra a = derive_brackets(d, l1, m_cap, N);
  ModeAlgebra b = derive_brackets(d, l2, m_cap, N);
  ModeAlgebra s = derive_brackets(d, l1 + l2, m_cap, N);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int m = 1; m <= m_cap; ++m)
        rep.note(qs_eq(a.cmode(i, j, m) + b.cmode(i, j, m), s.cmode(i, j, m)),
                 "additivity (" + std::to_string(i) + "," + std::to_string(j) +
                     ") m=" + std::to_string(m));
  return rep;
}

inline void brackets_csv(const ModeAlgebra& ma, std::ostream& os) {
  os << "i,j,m,hbar_order,value\n";
  for (int i = 0; i < ma.d.n; ++i)
    for (int j = 0; j < ma.d.n; ++j)
      for (int m = 1; m <= ma.m_cap; ++m) {
        QSeries c = ma.cmode(i, j, m);
        for (int k = 0; k <= c.cap; ++k)
          if (c.at(k) != 0)
            os << i << ',' << j << ',' << m << ',' << k << ',' << c.at(k)
               << '\n';
      }
}

// -----------------------------------------------------------------------------
// Elementary mode actions on states with QSeries coefficients.
// -----------------------------------------------------------------------------

// b_i(m): creation for m <= -1, annihilation (with the algebra's bracket
// scalars) for m >= 1, zero for m = 0.
inline FVec<QSeries> act_mode(const ModeAlgebra& ma, int i, int m,
                              const FVec<QSeries>& v) {
  GenField<QSeries> F;
  if (m <= -1) {
    F.cre[{i, -m}] = QSeries::one(ma.N);
  } else if (m >= 1) {
    for (int j = 0; j < ma.d.n; ++j) {
      QSeries c = ma.cmode(i, j, m);
      if (!c.is_zero()) F.rem[{j, m}] = c;
    }
  } else {
    return FVec<QSeries>();
  }
  return apply_gen(F, v, ma.N);
}

// =============================================================================
// One-variable current halves on a single Fock slot.
//
// The plus half creates b_i(-n) weighted by z^{n-1}.  The minus half removes a
// factor b_j(-n) against the classical scalar n (r_i a_ij) r l z^{-n-1} plus
// the regular/singular pairing series of the deformation tuple's h-h
// component, expanded with the first variable dominant.
// =============================================================================
struct CurrentHalves {
  GenField<HSeries> plus, minus;
};

// `slot_base` offsets the generator indices (used to run tensor squares on a
// single mode set).
inline CurrentHalves build_current(const CartanDatum& d, const Rat& ell, int i,
                                   const TauElement& whl, int ncap, int N,
                                   int slot_base = 0) {
  CurrentHalves F;
  Rat rl = Rat(d.r) * ell;
  for (int n = 1; n <= ncap; ++n)
    F.plus.cre[{slot_base + i, n}] = HSeries::monomial(N, n - 1, 0, Rat(1));
  for (int j = 0; j < d.n; ++j) {
    BiSeries pair12 =
        expand_region(whl.t[whl.idx(i, j)], BiMode::Diff12, ncap - 1);
    for (int n = 1; n <= ncap; ++n) {
      HSeries s = HSeries::monomial(N, -n - 1, 0, Rat(n) * d.b(i, j) * rl);
      s = s + pair12.get(n - 1);
      if (!s.is_zero()) F.minus.rem[{slot_base + j, n}] = s;
    }
  }
  return F;
}

// The smoothing operator -q^{-r l d/dz} 2 hbar f0(2 hbar d/dz).
inline OpSeries smoothing_op(const Rat& rl, int N) {
  return Rat(-2) * (OpSeries::hbar(1, N) * OpSeries::shift(-rl, N) *
                    OpSeries::f0_2w(N));
}

inline GenField<HSeries> map_field(const OpSeries& op,
                                   const GenField<HSeries>& F) {
  GenField<HSeries> r;
  for (auto& [gm, s] : F.cre) {
    HSeries t = apply_op(op, s);
    if (!t.is_zero()) r.cre[gm] = t;
  }
  for (auto& [gm, s] : F.rem) {
    HSeries t = apply_op(op, s);
    if (!t.is_zero()) r.rem[gm] = t;
  }
  return r;
}

// Embed a one-variable field into the two-variable setting, as a function of
// the primary (first) or secondary (second) variable.
inline GenField<BiSeries> embed_field(const GenField<HSeries>& F, bool primary) {
  GenField<BiSeries> r;
  for (auto& [gm, s] : F.cre)
    r.cre[gm] = primary ? embed_primary(s, BR_12) : embed_secondary(s, BR_12);
  for (auto& [gm, s] : F.rem)
    r.rem[gm] = primary ? embed_primary(s, BR_12) : embed_secondary(s, BR_12);
  return r;
}

// Residue mode (u)_{-1} of a one-variable field: the z^0 layer of every
// coefficient.
inline GenField<QSeries> field_residue_mode(const GenField<HSeries>& F) {
  GenField<QSeries> r;
  for (auto& [gm, s] : F.cre) {
    QSeries c = coeff_z(s, 0);
    if (!c.is_zero()) r.cre[gm] = c;
  }
  for (auto& [gm, s] : F.rem) {
    QSeries c = coeff_z(s, 0);
    if (!c.is_zero()) r.rem[gm] = c;
  }
  return r;
}

// =============================================================================
// Exponentiated Cartan states.
// =============================================================================

// sqrt(f0(2 r_i hbar + 2 r l hbar) / f0(2 r_i hbar - 2 r l hbar)).
inline QSeries exp_state_prefactor(const CartanDatum& d, int i, const Rat& rl,
                                   int N) {
  Rat c = 2 * Rat(d.ri[i]);
  return qs_sqrt(qs_div(f0_eval(c + 2 * rl, N), f0_eval(c - 2 * rl, N)));
}

// The exponential of the (-1)-mode of the smoothed Cartan generator applied to
// the vacuum, with the square-root prefactor.
inline FVec<QSeries> build_E(const CartanDatum& d, const Rat& ell, int i,
                             const TauElement& whl, int N, int slot_base = 0) {
  Rat rl = Rat(d.r) * ell;
  CurrentHalves cur = build_current(d, ell, i, whl, N, N, slot_base);
  OpSeries op = smoothing_op(rl, N);
  GenField<QSeries> mode = field_residue_mode(
      gf_add(map_field(op, cur.plus), map_field(op, cur.minus)));
  FVec<QSeries> vac = FVec<QSeries>::vacuum(QSeries::one(N));
  return fv_scale(exp_state_prefactor(d, i, rl, N), apply_exp(mode, vac, N));
}

// =============================================================================
// Commutator suite for the current halves.
// =============================================================================
namespace fock_detail {

inline FVec<BiSeries> commutator(const GenField<BiSeries>& F,
                                 const GenField<BiSeries>& G,
                                 const FVec<BiSeries>& v) {
  return apply_gen(F, apply_gen(G, v)) - apply_gen(G, apply_gen(F, v));
}

inline std::vector<FockMono> basis_monos(int gens, int ncap, int deg_cap) {
  std::vector<FockMono> out{FockMono{}};
  for (size_t head = 0; head < out.size(); ++head) {
    FockMono cur = out[head];
    auto last = cur.f.empty() ? std::make_pair(0, 1) : cur.f.back();
    for (int g = last.first; g < gens; ++g)
      for (int m = (g == last.first ? last.second : 1); m <= ncap; ++m)
        if (cur.degree() + m <= deg_cap) out.push_back(cur.with(g, m));
  }
  return out;
}

}  // namespace fock_detail

// Verifies the h-sector commutator identities between the annihilation half at
// the first variable and the creation half at the second, including the
// smoothed fields and their exponentials, as operator identities on every
// basis state within the cutoffs.
inline FockReport check_com_suite(const CartanDatum& d, const Rat& ell, int ncap,
                                  int deg_cap, int N, int W, int min_w,
                                  int min_z) {
  FockReport rep;
  Rat rl = Rat(d.r) * ell;
  // A mode cutoff of ncap certifies the identities through z2^{ncap-1}.  The
  // smoothed creation half spreads a mode-n factor down to z2^{n-1-N}, so the
  // internal fields must carry modes up to (ncap-1)+N+1 for those powers to
  // stay exact.
  int wcap = ncap - 1;
  int ncap_int = wcap + N + 1;
  // kernel poles deepen with the hbar layer and eat into the certified z1
  // windows of the scaled states, so both window bases carry extra slack
  int wker = wcap + min_z + 12;
  HSeries dlog = hs_dlog_f(N, wker + 2);
  HSeries d2log = hs_d2log_f(N, wker + 2);
  HSeries logf = hs_log_f(N, wker + 2);
  HSeries f = hs_f(N, wker + 2);
  TauElement whl = wh_ell(d, ell, N, W + ncap_int + 4);
  OpSeries sm = smoothing_op(rl, N);
  min_w = std::min(min_w, wcap);

  std::vector<GenField<BiSeries>> M(d.n), P(d.n), tM(d.n), tP(d.n), M2(d.n);
  for (int i = 0; i < d.n; ++i) {
    CurrentHalves cur = build_current(d, ell, i, whl, ncap_int, N);
    M[i] = embed_field(cur.minus, true);
    P[i] = embed_field(cur.plus, false);
    tM[i] = embed_field(map_field(sm, cur.minus), true);
    tP[i] = embed_field(map_field(sm, cur.plus), false);
    M2[i] = embed_field(cur.minus, false);  // annihilation half at z2
  }

  auto scale_all = [](const BiSeries& s, const FVec<BiSeries>& v) {
    return fv_scale(s, v);
  };
  std::vector<FockMono> basis = fock_detail::basis_monos(d.n, ncap, deg_cap);
  BiSeries one = embed_primary(HSeries::one(N), BR_12);

  using fock_detail::opq_diff;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      Rat nij = Rat(d.b(i, j));
      OpSeries qb_n = OpSeries::qbracket(nij, N);
      OpSeries qb_l = OpSeries::qbracket(rl, N);
      // commutator kernels, as functions of z1 - z2 with the first variable
      // dominant; the double z-derivative flips sign under z2
      BiSeries K1 = expand_region(
          -apply_op(qb_n * qb_l * OpSeries::shift(rl, N), d2log),
          BiMode::Diff12, wcap);
      BiSeries K4 = expand_region(
          apply_op(qb_n * qb_l * opq_diff(Rat(1), N), dlog), BiMode::Diff12,
          wcap);
      BiSeries K5 = expand_region(
          apply_op(qb_n * opq_diff(rl, N) * OpSeries::shift(2 * rl, N), dlog),
          BiMode::Diff12, wcap);
      OpSeries op6 =
          op_sub(OpSeries::shift(2 * rl, N), OpSeries::identity(N)) *
          op_sub(OpSeries::shift(-nij, N), OpSeries::shift(nij, N));
      BiSeries K6 = expand_region(apply_op(op6, logf), BiMode::Diff12, wcap);
      QExp g11 =
          (QExp::term(nij) - QExp::term(-nij)) * (QExp::one() - QExp::term(2 * rl));
      BiSeries S11 = expand_region(pow_gq(f, g11), BiMode::Diff12, wcap);

      std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (const FockMono& b : basis) {
        FVec<BiSeries> v;
        v.add(b, one);
        std::string at = tag + " deg" + std::to_string(b.degree());
        // both sides are certified only through z2^{wcap}
        auto clamp_w = [&](FVec<BiSeries> s) {
          for (auto& [key, mc] : s.t) {
            if (mc.second.w_cap > wcap) {
              mc.second.w_cap = wcap;
              mc.second.prune();
            }
          }
          return s;
        };
        auto eq = [&](const FVec<BiSeries>& x, const FVec<BiSeries>& y,
                      const std::string& what) {
          rep.note(fv_eq(clamp_w(x), clamp_w(y), N, min_w, min_z),
                   what + " " + at);
        };
        using fock_detail::commutator;
        eq(commutator(M[i], P[j], v), scale_all(K1, v), "minus-plus");
        eq(commutator(M[i], M2[j], v), FVec<BiSeries>(), "minus-minus");
        eq(commutator(tM[i], P[j], v), scale_all(K4, v), "smoothed-minus-plus");
        eq(commutator(M[i], tP[j], v), scale_all(K5, v), "minus-smoothed-plus");
        eq(commutator(tM[i], tP[j], v), scale_all(K6, v), "smoothed-both");
        FVec<BiSeries> em = apply_exp(tM[i], v);
        eq(apply_exp(tM[i], apply_gen(P[j], v)) - apply_gen(P[j], em),
           scale_all(K4, em), "exp-minus-vs-plus");
        FVec<BiSeries> ep = apply_exp(tP[j], v);
        eq(apply_gen(M[i], ep) - apply_exp(tP[j], apply_gen(M[i], v)),
           scale_all(K5, ep), "minus-vs-exp-plus");
        eq(apply_exp(tM[i], ep),
           scale_all(S11, apply_exp(tP[j], apply_exp(tM[i], v))),
           "exp-exchange");
      }
    }
  return rep;
}

// =============================================================================
// The vertex operator of the exponentiated Cartan state.
// =============================================================================
namespace fock_detail {

inline HSeries hs_from_qs(const QSeries& q, int N) {
  HSeries r(N);
  if (q.val < 0) throw std::domain_error("hs_from_qs: pole in hbar");
  for (int k = 0; k <= N; ++k) {
    if (k > q.cap) {
      r.hi[k] = Z_NONE;
      continue;
    }
    if (q.at(k) != 0) r.c[k][0] = q.at(k);
  }
  return r;
}

// <0| prod b_{g_a}(m_a) |mono>: sum over perfect matchings weighted by the
// classical pairing m (r_g a_{g g'}) r l.
inline Rat pair_bras(const CartanDatum& d, const Rat& rl,
                     std::vector<std::pair<int, int>> bras, FockMono ket) {
  if (bras.empty()) return ket.f.empty() ? Rat(1) : Rat(0);
  auto [gi, m] = bras.back();
  bras.pop_back();
  Rat acc(0);
  for (size_t p = 0; p < ket.f.size(); ++p) {
    auto [gj, n] = ket.f[p];
    if (n != m) continue;
    Rat c = Rat(m) * d.b(gi, gj) * rl;
    if (c != 0) acc += c * pair_bras(d, rl, bras, ket.without(p));
  }
  return acc;
}

// Independent matrix-element oracle for exp(A) exp(B) with A a creation form
// and B a removal form: remove any subset of ket factors against B's scalars,
// then contract each bra mode either with a surviving ket factor or with one
// creation factor of A.
inline HSeries wick_oracle(const CartanDatum& d, const Rat& rl,
                           const GenField<HSeries>& A,
                           const GenField<HSeries>& B,
                           std::vector<std::pair<int, int>> bras, FockMono ket,
                           int N) {
  if (bras.empty()) {
    // all remaining ket factors must be removed by B
    HSeries acc = HSeries::one(N);
    for (auto& gm : ket.f) {
      auto it = B.rem.find(gm);
      if (it == B.rem.end()) return HSeries::zero(N);
      acc = acc * it->second;
    }
    return acc;
  }
  auto [gi, m] = bras.back();
  bras.pop_back();
  HSeries acc = HSeries::zero(N);
  for (size_t p = 0; p < ket.f.size(); ++p) {
    auto [gj, n] = ket.f[p];
    if (n != m) continue;
    Rat c = Rat(m) * d.b(gi, gj) * rl;
    if (c != 0)
      acc = acc + c * wick_oracle(d, rl, A, B, bras, ket.without(p), N);
  }
  HSeries across = HSeries::zero(N);
  for (auto& [gm2, coef] : A.cre) {
    auto [gj, n] = gm2;
    if (n != m) continue;
    Rat c = Rat(m) * d.b(gi, gj) * rl;
    if (c != 0) across = across + c * coef;
  }
  if (!across.is_zero())
    acc = acc + across * wick_oracle(d, rl, A, B, bras, ket, N);
  return acc;
}

inline HSeries contract(const CartanDatum& d, const Rat& rl,
                        const std::vector<std::pair<int, int>>& bras,
                        const FVec<HSeries>& v, int N) {
  HSeries acc = HSeries::zero(N);
  for (auto& [k, mc] : v.t) {
    Rat p = pair_bras(d, rl, bras, mc.first);
    if (p != 0) acc = acc + p * mc.second;
  }
  return acc;
}

}  // namespace fock_detail

// The vertex operator of the exponentiated state factors as
// exp(smoothed plus half) exp(smoothed minus half); verified through
//   (a) the exchange scalar's constant term against the closed f0-ratio log,
//   (b) the vacuum axiom against the translated state, and
//   (c) low-degree matrix elements against an independent pairing oracle.
inline FockReport check_YE(const CartanDatum& d, const Rat& ell, int i, int ncap,
                           int me_deg, int N, int W, int min_window) {
  FockReport rep;
  Rat rl = Rat(d.r) * ell;
  Rat ri2 = 2 * Rat(d.ri[i]);
  TauElement whl = wh_ell(d, ell, N, W);
  OpSeries sm = smoothing_op(rl, N);
  CurrentHalves cur = build_current(d, ell, i, whl, ncap, N);
  GenField<HSeries> A = map_field(sm, cur.plus);
  GenField<HSeries> B = map_field(sm, cur.minus);

  // (a) exchange-scalar residue: the z^0 term of the smoothed-both kernel is
  // the log of the f0 ratio appearing in the prefactor
  {
    HSeries logf = hs_log_f(N, W + 2);
    OpSeries op6 =
        op_sub(OpSeries::shift(2 * rl, N), OpSeries::identity(N)) *
        op_sub(OpSeries::shift(-ri2, N), OpSeries::shift(ri2, N));
    QSeries res = coeff_z(apply_op(op6, logf), 0);
    QSeries closed = qs_log(f0_eval(ri2 - 2 * rl, N)) -
                     qs_log(f0_eval(ri2 + 2 * rl, N));
    rep.note(qs_eq(res, closed), "exchange-residue closed form");
  }

  // (b) vacuum axiom: exp(plus(z)) |0> equals the z-translated state, compared
  // through z^zc
  {
    int zc = 8;
    FVec<HSeries> vac = FVec<HSeries>::vacuum(HSeries::one(N));
    FVec<HSeries> lhs = apply_exp(A, apply_exp(B, vac));
    FVec<QSeries> Es = build_E(d, ell, i, whl, N);
    FVec<HSeries> rhs;
    FVec<QSeries> der = Es;
    Rat invfact(1);
    for (int k = 0; k <= zc; ++k) {
      if (k > 0) {
        der = act_derivation(der);
        invfact /= k;
      }
      for (auto& [key, mc] : der.t) {
        // translation raises modes past the field cap; compare on the states
        // the capped creation half can reach, where both sides are exact
        bool in_range = true;
        for (auto& gm : mc.first.f) in_range = in_range && gm.second <= ncap;
        if (!in_range) continue;
        HSeries h = invfact * mul_z_pow(fock_detail::hs_from_qs(mc.second, N), k);
        rhs.add(mc.first, h);
      }
    }
    // both sides are certified only through z^zc: the translation sum stops
    // there, and states beyond it on the left have no counterpart yet
    for (auto* side : {&lhs, &rhs})
      for (auto& [key, mc] : side->t) {
        for (int k = 0; k <= N; ++k)
          mc.second.hi[k] = std::min(mc.second.hi[k], zc);
        mc.second.prune();
      }
    rep.note(fv_eq(lhs, rhs, N, min_window), "vacuum axiom");
  }

  // (c) matrix elements vs the pairing oracle
  {
    std::vector<FockMono> kets = fock_detail::basis_monos(d.n, ncap, me_deg);
    for (const FockMono& bra : kets)
      for (const FockMono& ket : kets) {
        FVec<HSeries> v;
        v.add(ket, HSeries::one(N));
        HSeries lhs = fock_detail::contract(d, rl, bra.f,
                                            apply_exp(A, apply_exp(B, v)), N);
        HSeries rhs = fock_detail::wick_oracle(d, rl, A, B, bra.f, ket, N);
        rep.note(hs_eq(lhs, rhs, min_window),
                 "matrix element <deg " + std::to_string(bra.degree()) +
                     "|deg " + std::to_string(ket.degree()) + ">");
      }
  }
  return rep;
}

// =============================================================================
// Coproduct of the exponentiated state on the tensor Fock square.
// =============================================================================

// Verifies, for each Cartan index, that the exponentiated state of the summed
// level built from the coproduct generator equals the translated tensor
// product of the factor states:
//   (1) the cross-commutator scalar kappa matches its closed f0-ratio log,
//   (2) the truncated BCH split with exp(-kappa/2) holds on the tensor square,
//   (3) the prefactor identity closes, and the full states agree.
inline FockReport check_e_coproduct(const CartanDatum& d, const Rat& ell,
                                    const Rat& ellp, int N, int W) {
  FockReport rep;
  Rat rl = Rat(d.r) * ell, rlp = Rat(d.r) * ellp, rL = rl + rlp;
  TauElement whl = wh_ell(d, ell, N, W);
  TauElement whlp = wh_ell(d, ellp, N, W);
  HSeries logf = hs_log_f(N, W + 2);

  for (int i = 0; i < d.n; ++i) {
    std::string tag = " i=" + std::to_string(i);
    Rat ri2 = 2 * Rat(d.ri[i]);

    // the two coproduct summands as slot-local fields with their translations
    OpSeries op_a = Rat(-2) * (OpSeries::hbar(1, N) *
                               OpSeries::shift(-(rl + 2 * rlp), N) *
                               OpSeries::f0_2w(N));
    OpSeries op_b = Rat(-2) * (OpSeries::hbar(1, N) * OpSeries::shift(-rlp, N) *
                               OpSeries::f0_2w(N));
    CurrentHalves cur1 = build_current(d, ell, i, whl, N, N, 0);
    CurrentHalves cur2 = build_current(d, ellp, i, whlp, N, N, d.n);
    GenField<QSeries> amode = field_residue_mode(
        gf_add(map_field(op_a, cur1.plus), map_field(op_a, cur1.minus)));
    GenField<QSeries> bmode = field_residue_mode(
        gf_add(map_field(op_b, cur2.plus), map_field(op_b, cur2.minus)));

    // cross-commutator kernel: the braiding correction of the second summand
    // against the first slot's creation modes, with the first summand's
    // smoothing divided back out
    QSeries kappa;
    {
      OpSeries opG =
          op_sub(OpSeries::shift(ri2, N), OpSeries::shift(-ri2, N)) *
          op_sub(OpSeries::shift(2 * rl, N), OpSeries::identity(N)) *
          op_sub(OpSeries::shift(2 * rlp, N), OpSeries::identity(N));
      HSeries Lam = apply_op(opG, logf);
      kappa = coeff_z(Lam, 0);
      // distribute over first-slot modes
      for (int j = 0; j < d.n; ++j) {
        OpSeries opGj =
            op_sub(OpSeries::shift(Rat(d.b(i, j)), N),
                   OpSeries::shift(Rat(-d.b(i, j)), N)) *
            op_sub(OpSeries::shift(2 * rl, N), OpSeries::identity(N)) *
            op_sub(OpSeries::shift(2 * rlp, N), OpSeries::identity(N));
        OpSeries op_a_neg = Rat(-2) * (OpSeries::hbar(1, N) *
                                       OpSeries::shift(rl + 2 * rlp, N) *
                                       OpSeries::f0_2w(N));
        HSeries Psi = apply_op(op_invert(op_a_neg), apply_op(opGj, logf));
        BiSeries p21 = expand_region(subst_neg(Psi), BiMode::Diff21, N);
        for (int m = 1; m <= N; ++m) {
          // orientation fixed by the requirement that the mode commutator act
          // as +kappa, the sign under which the prefactor identity closes
          QSeries kc = -coeff_z(p21.get(m - 1), 0);
          if (kc.is_zero()) continue;
          auto [it, ins] = bmode.rem.try_emplace(std::make_pair(j, m), kc);
          if (!ins) it->second = it->second + kc;
        }
      }
      // (1) closed form
      QSeries closed =
          qs_log(f0_eval(ri2 + 2 * rL, N)) - qs_log(f0_eval(ri2 - 2 * rL, N)) +
          qs_log(f0_eval(ri2 - 2 * rl, N)) - qs_log(f0_eval(ri2 + 2 * rl, N)) +
          qs_log(f0_eval(ri2 - 2 * rlp, N)) - qs_log(f0_eval(ri2 + 2 * rlp, N));
      rep.note(qs_eq(kappa, closed), "cross-scalar closed form" + tag);
    }

    FVec<QSeries> vac = FVec<QSeries>::vacuum(QSeries::one(N));

    // the distributed cross-removal realizes kappa on states
    {
      auto br = [&](const FVec<QSeries>& v) {
        return apply_gen(amode, apply_gen(bmode, v, N), N) -
               apply_gen(bmode, apply_gen(amode, v, N), N);
      };
      FVec<QSeries> v1 = apply_gen(amode, vac, N);
      rep.note(fv_eq(br(vac), fv_scale(kappa, vac), N),
               "cross-commutator on vacuum" + tag);
      rep.note(fv_eq(br(v1), fv_scale(kappa, v1), N),
               "cross-commutator on excited state" + tag);
    }

    // (2) BCH split
    FVec<QSeries> joint = apply_exp(gf_add(amode, bmode), vac, N);
    FVec<QSeries> split = fv_scale(qs_exp(Rat(-1, 2) * kappa),
                                   apply_exp(amode, apply_exp(bmode, vac, N), N));
    rep.note(fv_eq(joint, split, N), "BCH split" + tag);

    // (3) prefactor identity and the full state equality
    QSeries pfL = exp_state_prefactor(d, i, rL, N);
    QSeries pf1 = exp_state_prefactor(d, i, rl, N);
    QSeries pf2 = exp_state_prefactor(d, i, rlp, N);
    rep.note(qs_eq(pfL * qs_exp(Rat(-1, 2) * kappa), pf1 * pf2),
             "prefactor identity" + tag);

    FVec<QSeries> lhs = fv_scale(pfL, joint);
    FVec<QSeries> E1 = act_translate(-2 * rlp, build_E(d, ell, i, whl, N, 0), N);
    FVec<QSeries> E2 = build_E(d, ellp, i, whlp, N, d.n);
    FVec<QSeries> rhs;
    for (auto& [k1, mc1] : E1.t)
      for (auto& [k2, mc2] : E2.t) {
        FockMono m = mc1.first;
        for (auto& gm : mc2.first.f) m = m.with(gm.first, gm.second);
        rhs.add(m, mc1.second * mc2.second);
      }
    rep.note(fv_eq(lhs, rhs, N), "full state equality" + tag);
  }
  return rep;
}

}  // namespace qva
