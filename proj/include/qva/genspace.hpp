#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qva/biseries.hpp"
#include "qva/cartan.hpp"
#include "qva/hseries.hpp"
#include "qva/tau.hpp"

namespace qva {

// -----------------------------------------------------------------------------
// Generator-level tensor calculus: formal tensor words over translated
// generator symbols, the braiding tables S_{l,l'}(z), the coproduct tables,
// and the axiom checks that close on this span.
// -----------------------------------------------------------------------------

enum class GK { Vac, H, Xp, Xm, E };

// A generator symbol with a translation prefix e^{c hbar d/dz}; E symbols
// additionally carry the level they were defined at.
struct GenSymbol {
  GK k = GK::Vac;
  int idx = 0;
  Rat trans = Rat(0);
  Rat elevel = Rat(0);

  static GenSymbol vac() { return GenSymbol{}; }
  static GenSymbol h(int i, const Rat& c = Rat(0)) {
    return GenSymbol{GK::H, i, c, Rat(0)};
  }
  static GenSymbol x(int i, int eps, const Rat& c = Rat(0)) {
    return GenSymbol{eps > 0 ? GK::Xp : GK::Xm, i, c, Rat(0)};
  }
  static GenSymbol e(int i, const Rat& lev, const Rat& c = Rat(0)) {
    return GenSymbol{GK::E, i, c, lev};
  }

  GenSymbol base() const {  // translation stripped
    GenSymbol b = *this;
    b.trans = 0;
    return b;
  }
  GenSymbol shifted(const Rat& c) const {
    GenSymbol b = *this;
    if (b.k != GK::Vac) b.trans += c;
    return b;
  }

  std::string key() const {
    std::ostringstream os;
    switch (k) {
      case GK::Vac: return "1";
      case GK::H: os << "h" << idx; break;
      case GK::Xp: os << "x+" << idx; break;
      case GK::Xm: os << "x-" << idx; break;
      case GK::E: os << "E" << idx << "{" << elevel << "}"; break;
    }
    if (trans != 0) os << "@" << trans;
    return os.str();
  }
};

struct TensorTerm {
  std::vector<GenSymbol> s;
  std::string key() const {
    std::string r;
    for (size_t a = 0; a < s.size(); ++a) {
      if (a) r += " (x) ";
      r += s[a].key();
    }
    return r;
  }
};

// Finite linear combination of tensor words; coefficients C are HSeries for
// one-variable checks and BiSeries for the two-variable Yang-Baxter check.
template <class C>
struct LinComb {
  std::map<std::string, std::pair<TensorTerm, C>> t;

  void add(const TensorTerm& term, const C& coef) {
    std::string k = term.key();
    auto it = t.find(k);
    if (it == t.end())
      t.emplace(k, std::make_pair(term, coef));
    else
      it->second.second = it->second.second + coef;
  }
};

// -----------------------------------------------------------------------------
// The braiding table rows.  A row maps a base pair (v, u) to output symbols
// with a scalar: either the identity, a twisted power of d log f or
// d^2 log f (an operator in hbar d/dz applied to the base series), or a
// twisted multiplicative power of f.
// -----------------------------------------------------------------------------
enum class SK { Id, DLog, D2Log, FPow };

struct SRow {
  GenSymbol v, u;
  Rat coef = Rat(1);
  SK kind = SK::Id;
  OpSeries op;
  QExp g;
  std::string tag;  // cache key for the evaluated scalar
};

namespace detail {
inline std::string rstr(const Rat& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}
inline QExp qq(const Rat& a) {  // q^a - q^{-a}
  QExp g;
  g.add_term(a, Rat(1));
  g.add_term(-a, Rat(-1));
  return g;
}
inline std::string gtag(const QExp& g) {
  std::ostringstream os;
  for (auto& [e, c] : g.c) os << e << ":" << c << ";";
  return os.str();
}
inline int non_vac(const TensorTerm& t) {
  int n = 0;
  for (auto& g : t.s)
    if (g.k != GK::Vac) ++n;
  return n;
}
}  // namespace detail

// Rows of S_{lv,lvp}(z) applied to the untranslated pair (v, u); v sits in the
// level-lv slot, u in the level-lvp slot.  The first row is always the
// diagonal one; every further row strictly lowers the non-vacuum count.
inline std::vector<SRow> s_table(const CartanDatum& d, const Rat& lv,
                                 const Rat& lvp, const GenSymbol& v,
                                 const GenSymbol& u, int N) {
  using detail::qq;
  using detail::rstr;
  std::vector<SRow> rows;
  SRow diag;
  diag.v = v;
  diag.u = u;
  rows.push_back(diag);
  if (v.k == GK::Vac || u.k == GK::Vac) return rows;
  if (v.k == GK::E && v.elevel != lv)
    throw std::domain_error("s_table: E level does not match first slot");
  if (u.k == GK::E && u.elevel != lvp)
    throw std::domain_error("s_table: E level does not match second slot");
  Rat rl = Rat(d.r) * lv, rlp = Rat(d.r) * lvp;
  Rat n = Rat(d.b(u.idx, v.idx));  // r_i a_ij, i = u's index, j = v's index
  OpSeries qmq = op_sub(OpSeries::shift(Rat(1), N), OpSeries::shift(Rat(-1), N));
  std::string lvl = "|" + rstr(n) + "|" + rstr(rl) + "|" + rstr(rlp);
  int e1 = (v.k == GK::Xp) ? 1 : (v.k == GK::Xm) ? -1 : 0;
  int e2 = (u.k == GK::Xp) ? 1 : (u.k == GK::Xm) ? -1 : 0;
  if (v.k == GK::H && u.k == GK::H) {
    SRow r;
    r.v = GenSymbol::vac();
    r.u = GenSymbol::vac();
    r.kind = SK::D2Log;
    r.op = OpSeries::qbracket(n, N) * OpSeries::qbracket(rl, N) *
           OpSeries::qbracket(rlp, N) * qmq;
    r.tag = "hh" + lvl;
    rows.push_back(r);
  } else if (v.k != GK::Vac && e1 != 0 && u.k == GK::H) {
    SRow r;
    r.v = v;
    r.u = GenSymbol::vac();
    r.coef = Rat(e1);
    r.kind = SK::DLog;
    r.op = OpSeries::qbracket(n, N) * OpSeries::qbracket(rlp, N) * qmq;
    r.tag = "xh" + lvl;
    rows.push_back(r);
  } else if (v.k == GK::H && e2 != 0) {
    SRow r;
    r.v = GenSymbol::vac();
    r.u = u;
    r.coef = Rat(-e2);
    r.kind = SK::DLog;
    r.op = OpSeries::qbracket(n, N) * OpSeries::qbracket(rl, N) * qmq;
    r.tag = "hx" + lvl;
    rows.push_back(r);
  } else if (e1 != 0 && e2 != 0) {
    rows[0].kind = SK::FPow;
    rows[0].g = qq(Rat(-e1 * e2) * n);
    rows[0].tag = "xx|" + detail::gtag(rows[0].g);
  } else if (v.k == GK::E && u.k == GK::H) {
    SRow r;
    r.v = v;
    r.u = GenSymbol::vac();
    r.kind = SK::DLog;
    r.op = Rat(-1) * (OpSeries::qbracket(n, N) * OpSeries::qbracket(rl, N) *
                      OpSeries::qbracket(rlp, N) * qmq * qmq *
                      OpSeries::shift(-rl, N));
    r.tag = "Eh" + lvl;
    rows.push_back(r);
  } else if (v.k == GK::H && u.k == GK::E) {
    SRow r;
    r.v = GenSymbol::vac();
    r.u = u;
    r.kind = SK::DLog;
    r.op = Rat(-1) * (OpSeries::qbracket(n, N) * OpSeries::qbracket(rl, N) *
                      OpSeries::qbracket(rlp, N) * qmq * qmq *
                      OpSeries::shift(rlp, N));
    r.tag = "hE" + lvl;
    rows.push_back(r);
  } else if (v.k == GK::E && u.k == GK::E) {
    QExp h;
    h.add_term(2 * rlp, Rat(1));
    h.add_term(-2 * rl, Rat(1));
    h.add_term(Rat(0), Rat(-1));
    h.add_term(2 * (rlp - rl), Rat(-1));
    QExp g = qq(n) * h;
    rows[0].kind = SK::FPow;
    rows[0].g = g;
    rows[0].tag = "EE|" + detail::gtag(g);
  } else if (e1 != 0 && u.k == GK::E) {
    QExp h;
    h.add_term(Rat(0), Rat(e1));
    h.add_term(2 * rlp, Rat(-e1));
    QExp g = qq(n) * h;
    rows[0].kind = SK::FPow;
    rows[0].g = g;
    rows[0].tag = "xE|" + detail::gtag(g);
  } else if (v.k == GK::E && e2 != 0) {
    QExp h;
    h.add_term(Rat(0), Rat(e2));
    h.add_term(-2 * rl, Rat(-e2));
    QExp g = qq(n) * h;
    rows[0].kind = SK::FPow;
    rows[0].g = g;
    rows[0].tag = "Ex|" + detail::gtag(g);
  } else {
    throw std::domain_error("s_table: pair outside the table closure");
  }
  for (size_t a = 1; a < rows.size(); ++a) {
    TensorTerm in{{v, u}}, out{{rows[a].v, rows[a].u}};
    if (detail::non_vac(out) >= detail::non_vac(in))
      throw std::logic_error("s_table: correction row does not lower grading");
  }
  return rows;
}

// -----------------------------------------------------------------------------
// Scalar evaluation with caching.
// -----------------------------------------------------------------------------
enum class SVar { Z1, Z2, Sum };  // argument of the S-factor in the QYB check

struct SContext {
  int N, W;
  HSeries dlog, d2log, f;

  std::map<std::string, HSeries> hcache;
  std::map<std::string, BiSeries> bcache;

  SContext(int N_, int W_)
      : N(N_),
        W(W_),
        dlog(hs_dlog_f(N_, W_ + 2)),
        d2log(hs_d2log_f(N_, W_ + 2)),
        f(hs_f(N_, W_ + 2)) {}

  HSeries base_scalar(const SRow& row) {
    auto it = hcache.find(row.tag);
    if (it != hcache.end()) return it->second;
    HSeries s;
    switch (row.kind) {
      case SK::Id: s = HSeries::one(N); break;
      case SK::DLog: s = apply_op(row.op, dlog); break;
      case SK::D2Log: s = apply_op(row.op, d2log); break;
      case SK::FPow: s = pow_gq(f, row.g); break;
    }
    hcache.emplace(row.tag, s);
    return s;
  }

  // scalar at (sigma*z + c*hbar)
  HSeries scalar_at(const SRow& row, int sigma, const Rat& c) {
    if (row.kind == SK::Id) return HSeries::one(N);
    std::string k = row.tag + "#" + (sigma < 0 ? "-" : "+") + detail::rstr(c);
    auto it = hcache.find(k);
    if (it != hcache.end()) return it->second;
    HSeries s = shift_z(base_scalar(row), c);
    if (sigma < 0) s = subst_neg(s);
    hcache.emplace(k, s);
    return s;
  }

  // scalar at (var + c*hbar) as a BiSeries in the |z1| > |z2| region
  BiSeries scalar_bi(const SRow& row, SVar var, const Rat& c, int w_cap) {
    if (row.kind == SK::Id)
      return embed_primary(HSeries::one(N));
    std::string k = row.tag + "#v" + std::to_string((int)var) + "#" +
                    detail::rstr(c) + "#" + std::to_string(w_cap);
    auto it = bcache.find(k);
    if (it != bcache.end()) return it->second;
    HSeries s = shift_z(base_scalar(row), c);
    BiSeries b;
    switch (var) {
      case SVar::Z1: b = embed_primary(s); break;
      case SVar::Z2: b = embed_secondary(s); break;
      case SVar::Sum: b = expand_region(s, BiMode::Sum12, w_cap); break;
    }
    bcache.emplace(k, b);
    return b;
  }
};

// -----------------------------------------------------------------------------
// Applying S and Delta to tensor words.
// -----------------------------------------------------------------------------

// S_{lv,lvp}(sigma*z + c0*hbar) acting on slots (p, q) of each term.
// Translations a, b on the pair normalize through the shift rule
//   S(z)(e^{a hbar d} v (x) e^{b hbar d} u)
//     = (e^{a hbar d} (x) e^{b hbar d}) S(z + (a-b) hbar)(v (x) u).
inline LinComb<HSeries> s_apply(SContext& ctx, const CartanDatum& d,
                                const Rat& lv, const Rat& lvp,
                                const LinComb<HSeries>& x, int p, int q,
                                int sigma = 1, const Rat& c0 = Rat(0)) {
  LinComb<HSeries> r;
  for (auto& [unused, tc] : x.t) {
    const TensorTerm& term = tc.first;
    const HSeries& coef = tc.second;
    const GenSymbol& v = term.s[p];
    const GenSymbol& u = term.s[q];
    Rat c = c0 + v.trans - u.trans;
    for (const SRow& row : s_table(d, lv, lvp, v.base(), u.base(), ctx.N)) {
      TensorTerm out = term;
      out.s[p] = row.v.shifted(v.trans);
      out.s[q] = row.u.shifted(u.trans);
      r.add(out, row.coef * (coef * ctx.scalar_at(row, sigma, c)));
    }
  }
  return r;
}

inline LinComb<BiSeries> s_apply_bi(SContext& ctx, const CartanDatum& d,
                                    const Rat& lv, const Rat& lvp,
                                    const LinComb<BiSeries>& x, int p, int q,
                                    SVar var, int w_cap) {
  LinComb<BiSeries> r;
  for (auto& [unused, tc] : x.t) {
    const TensorTerm& term = tc.first;
    const BiSeries& coef = tc.second;
    const GenSymbol& v = term.s[p];
    const GenSymbol& u = term.s[q];
    Rat c = v.trans - u.trans;
    for (const SRow& row : s_table(d, lv, lvp, v.base(), u.base(), ctx.N)) {
      TensorTerm out = term;
      out.s[p] = row.v.shifted(v.trans);
      out.s[q] = row.u.shifted(u.trans);
      r.add(out, row.coef * (coef * ctx.scalar_bi(row, var, c, w_cap)));
    }
  }
  return r;
}

// Delta for the level split (lA, lB), replacing `slot` by two slots.
// Translations push through diagonally.
inline LinComb<HSeries> delta_apply(const CartanDatum& d, const Rat& lA,
                                    const Rat& lB, const LinComb<HSeries>& x,
                                    int slot) {
  Rat ra = Rat(d.r) * lA, rb = Rat(d.r) * lB;
  LinComb<HSeries> r;
  for (auto& [unused, tc] : x.t) {
    const TensorTerm& term = tc.first;
    const GenSymbol g = term.s[slot];
    std::vector<std::pair<GenSymbol, GenSymbol>> parts;
    switch (g.k) {
      case GK::Vac:
        parts = {{GenSymbol::vac(), GenSymbol::vac()}};
        break;
      case GK::H:
        parts = {{GenSymbol::h(g.idx, -rb), GenSymbol::vac()},
                 {GenSymbol::vac(), GenSymbol::h(g.idx, ra)}};
        break;
      case GK::Xp:
        parts = {{GenSymbol::x(g.idx, 1), GenSymbol::vac()},
                 {GenSymbol::e(g.idx, lA, 2 * ra), GenSymbol::x(g.idx, 1, 2 * ra)}};
        break;
      case GK::Xm:
        parts = {{GenSymbol::x(g.idx, -1), GenSymbol::vac()},
                 {GenSymbol::vac(), GenSymbol::x(g.idx, -1)}};
        break;
      case GK::E:
        throw std::domain_error("delta_apply: coproduct of E is out of scope");
    }
    for (auto& [ga, gb] : parts) {
      TensorTerm out;
      for (int a = 0; a < (int)term.s.size(); ++a) {
        if (a == slot) {
          out.s.push_back(ga.shifted(g.trans));
          out.s.push_back(gb.shifted(g.trans));
        } else {
          out.s.push_back(term.s[a]);
        }
      }
      r.add(out, tc.second);
    }
  }
  return r;
}

// Drop all positive hbar orders: translations become trivial and E-symbols
// collapse to the vacuum.
inline LinComb<HSeries> classical_limit(const LinComb<HSeries>& x) {
  LinComb<HSeries> r;
  for (auto& [unused, tc] : x.t) {
    TensorTerm out = tc.first;
    for (auto& g : out.s) {
      g.trans = 0;
      if (g.k == GK::E) g = GenSymbol::vac();
    }
    HSeries c(tc.second.N);
    c.hi[0] = tc.second.hi[0];
    c.c[0] = tc.second.c[0];
    c.logz = tc.second.logz;
    r.add(out, c);
  }
  return r;
}

inline bool lc_eq(const LinComb<HSeries>& x, const LinComb<HSeries>& y,
                  int min_window) {
  std::map<std::string, char> keys;
  for (auto& [k, unused] : x.t) keys[k] = 1;
  for (auto& [k, unused] : y.t) keys[k] = 1;
  for (auto& [k, unused] : keys) {
    auto ix = x.t.find(k), iy = y.t.find(k);
    int N = (ix != x.t.end() ? ix->second.second : iy->second.second).N;
    const HSeries& cx =
        ix != x.t.end() ? ix->second.second : HSeries::zero(N);
    const HSeries& cy =
        iy != y.t.end() ? iy->second.second : HSeries::zero(N);
    if (!hs_eq(cx, cy, min_window)) return false;
  }
  return true;
}

inline bool lc_eq_bi(const LinComb<BiSeries>& x, const LinComb<BiSeries>& y,
                     int min_w, int min_z) {
  std::map<std::string, char> keys;
  for (auto& [k, unused] : x.t) keys[k] = 1;
  for (auto& [k, unused] : y.t) keys[k] = 1;
  for (auto& [k, unused] : keys) {
    auto ix = x.t.find(k), iy = y.t.find(k);
    if (ix == x.t.end() || iy == y.t.end()) {
      const BiSeries& c =
          (ix != x.t.end() ? ix : iy)->second.second;
      BiSeries z(c.N, c.region, Z_INF);
      if (!bs_eq(c, z, min_w, min_z)) return false;
      continue;
    }
    if (!bs_eq(ix->second.second, iy->second.second, min_w, min_z))
      return false;
  }
  return true;
}

// -----------------------------------------------------------------------------
// Checks.
// -----------------------------------------------------------------------------
struct GenReport {
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

namespace detail {
inline std::vector<GenSymbol> slot_symbols(const CartanDatum& d, const Rat& lev,
                                           bool with_e) {
  std::vector<GenSymbol> out{GenSymbol::vac()};
  for (int i = 0; i < d.n; ++i) {
    out.push_back(GenSymbol::h(i));
    out.push_back(GenSymbol::x(i, 1));
    out.push_back(GenSymbol::x(i, -1));
    if (with_e) out.push_back(GenSymbol::e(i, lev));
  }
  return out;
}
inline LinComb<HSeries> single(const TensorTerm& t, int N) {
  LinComb<HSeries> r;
  r.add(t, HSeries::one(N));
  return r;
}
inline TensorTerm flip2(const TensorTerm& t) {
  return TensorTerm{{t.s[1], t.s[0]}};
}
}  // namespace detail

// sigma S_{l,l'}(-z) sigma S_{l',l}(z) = 1 on every generator pair, checked
// without inversion: apply S_{l',l}(z), flip, apply S_{l,l'}(-z), flip back.
inline GenReport check_unitarity(const CartanDatum& d, const Rat& lv,
                                 const Rat& lvp, int N, int W,
                                 int min_window = 0) {
  GenReport rep;
  SContext ctx(N, W);
  for (const GenSymbol& v : detail::slot_symbols(d, lv, true))
    for (const GenSymbol& u : detail::slot_symbols(d, lvp, true)) {
      TensorTerm vu{{v, u}};
      LinComb<HSeries> w = detail::single(detail::flip2(vu), N);
      w = s_apply(ctx, d, lvp, lv, w, 0, 1, +1);
      LinComb<HSeries> flipped;
      for (auto& [unused, tc] : w.t)
        flipped.add(detail::flip2(tc.first), tc.second);
      flipped = s_apply(ctx, d, lv, lvp, flipped, 0, 1, -1);
      rep.note(lc_eq(flipped, detail::single(vu, N), min_window),
               "unitarity " + vu.key());
    }
  return rep;
}

// Quantum Yang-Baxter on generator triples:
//   S^{12}(z1) S^{13}(z1+z2) S^{23}(z2) = S^{23}(z2) S^{13}(z1+z2) S^{12}(z1)
// with coefficients expanded in the |z1| > |z2| region.
inline GenReport check_qyb(const CartanDatum& d, const Rat& l1, const Rat& l2,
                           const Rat& l3, int N, int W, int w_cap,
                           int min_z = 0) {
  GenReport rep;
  SContext ctx(N, W);
  // The z2-local scalars carry poles down to about z2^{-(N+1)}, so the
  // (z1+z2)-expansion must run that much deeper for the product to stay
  // certified through z2^{w_cap}.
  int wx = w_cap + N + 2;
  for (const GenSymbol& a : detail::slot_symbols(d, l1, false))
    for (const GenSymbol& b : detail::slot_symbols(d, l2, false))
      for (const GenSymbol& c : detail::slot_symbols(d, l3, false)) {
        if (a.k == GK::Vac || b.k == GK::Vac || c.k == GK::Vac) continue;
        TensorTerm t{{a, b, c}};
        LinComb<BiSeries> start;
        start.add(t, embed_primary(HSeries::one(N)));
        LinComb<BiSeries> lhs = start, rhs = start;
        lhs = s_apply_bi(ctx, d, l2, l3, lhs, 1, 2, SVar::Z2, wx);
        lhs = s_apply_bi(ctx, d, l1, l3, lhs, 0, 2, SVar::Sum, wx);
        lhs = s_apply_bi(ctx, d, l1, l2, lhs, 0, 1, SVar::Z1, wx);
        rhs = s_apply_bi(ctx, d, l1, l2, rhs, 0, 1, SVar::Z1, wx);
        rhs = s_apply_bi(ctx, d, l1, l3, rhs, 0, 2, SVar::Sum, wx);
        rhs = s_apply_bi(ctx, d, l2, l3, rhs, 1, 2, SVar::Z2, wx);
        rep.note(lc_eq_bi(lhs, rhs, w_cap, min_z), "qyb " + t.key());
      }
  return rep;
}

// S_{{l,l'},l''}(z) (Delta (x) 1) = (Delta (x) 1) S_{l+l',l''}(z) (side 0) and
// S_{l,{l',l''}}(z) (1 (x) Delta) = (1 (x) Delta) S_{l,l'+l''}(z) (side 1),
// on all generator pairs; side 0 additionally checks the closed forms of the
// composed action.
inline GenReport check_intertwine(const CartanDatum& d, int side, const Rat& l,
                                  const Rat& lp, const Rat& lpp, int N, int W,
                                  int min_window = 0) {
  GenReport rep;
  SContext ctx(N, W);
  OpSeries qmq = op_sub(OpSeries::shift(Rat(1), N), OpSeries::shift(Rat(-1), N));
  for (const GenSymbol& g : detail::slot_symbols(d, Rat(0), false))
    for (const GenSymbol& gp : detail::slot_symbols(d, Rat(0), false)) {
      if (g.k == GK::Vac && gp.k == GK::Vac) continue;
      TensorTerm pair{{g, gp}};
      LinComb<HSeries> lhs, rhs;
      if (side == 0) {
        lhs = delta_apply(d, l, lp, detail::single(pair, N), 0);
        lhs = s_apply(ctx, d, l, lpp, lhs, 0, 2);
        lhs = s_apply(ctx, d, lp, lpp, lhs, 1, 2);
        rhs = s_apply(ctx, d, l + lp, lpp, detail::single(pair, N), 0, 1);
        rhs = delta_apply(d, l, lp, rhs, 0);
      } else {
        lhs = delta_apply(d, lp, lpp, detail::single(pair, N), 1);
        lhs = s_apply(ctx, d, l, lpp, lhs, 0, 2);
        lhs = s_apply(ctx, d, l, lp, lhs, 0, 1);
        rhs = s_apply(ctx, d, l, lp + lpp, detail::single(pair, N), 0, 1);
        rhs = delta_apply(d, lp, lpp, rhs, 1);
      }
      rep.note(lc_eq(lhs, rhs, min_window),
               std::string("intertwine-") + (side == 0 ? "left " : "right ") +
                   pair.key());
      if (side != 0 || g.k == GK::Vac || gp.k == GK::Vac) continue;
      // closed forms of the composed action on Delta(g) (x) g'
      LinComb<HSeries> expect =
          delta_apply(d, l, lp, detail::single(pair, N), 0);
      Rat n = Rat(d.b(gp.idx, g.idx));
      Rat rpp = Rat(d.r) * lpp, rsum = Rat(d.r) * (l + lp);
      int eg = (g.k == GK::Xp) ? 1 : (g.k == GK::Xm) ? -1 : 0;
      int egp = (gp.k == GK::Xp) ? 1 : (gp.k == GK::Xm) ? -1 : 0;
      if (g.k == GK::H && gp.k == GK::H) {
        HSeries s = apply_op(OpSeries::qbracket(n, N) *
                                 OpSeries::qbracket(rpp, N) *
                                 OpSeries::qbracket(rsum, N) * qmq,
                             ctx.d2log);
        expect.add(TensorTerm{{GenSymbol::vac(), GenSymbol::vac(),
                               GenSymbol::vac()}},
                   s);
      } else if (g.k == GK::H && egp != 0) {
        HSeries s = apply_op(OpSeries::qbracket(n, N) *
                                 OpSeries::qbracket(rsum, N) * qmq,
                             ctx.dlog);
        TensorTerm t{{GenSymbol::vac(), GenSymbol::vac(), gp}};
        expect.add(t, Rat(-egp) * s);
      } else if (eg != 0 && gp.k == GK::H) {
        HSeries s = apply_op(OpSeries::qbracket(n, N) *
                                 OpSeries::qbracket(rpp, N) * qmq,
                             ctx.dlog);
        LinComb<HSeries> dg = delta_apply(
            d, l, lp, detail::single(TensorTerm{{g, GenSymbol::vac()}}, N), 0);
        for (auto& [unused, tc] : dg.t)
          expect.add(tc.first, Rat(eg) * (tc.second * s));
      } else if (eg != 0 && egp != 0) {
        HSeries s = pow_gq(ctx.f, detail::qq(Rat(-eg * egp) * n));
        expect = LinComb<HSeries>();
        LinComb<HSeries> dg =
            delta_apply(d, l, lp, detail::single(pair, N), 0);
        for (auto& [unused, tc] : dg.t) expect.add(tc.first, tc.second * s);
      }
      rep.note(lc_eq(lhs, expect, min_window),
               "intertwine-closed-form " + pair.key());
    }
  return rep;
}

// The braiding of the coproduct algebra,
//   S_D(z) = S_{l',l}^{23} S_{l,l}^{13} S_{l',l'}^{24} S_{l,l'}^{14},
// against the closed forms of its action on Delta(g) (x) Delta(g').
inline GenReport check_s_on_coproduct(const CartanDatum& d, const Rat& l,
                                      const Rat& lp, int N, int W,
                                      int min_window = 0) {
  GenReport rep;
  SContext ctx(N, W);
  OpSeries qmq = op_sub(OpSeries::shift(Rat(1), N), OpSeries::shift(Rat(-1), N));
  Rat rsum = Rat(d.r) * (l + lp);
  OpSeries qmq_sum =
      op_sub(OpSeries::shift(rsum, N), OpSeries::shift(-rsum, N));
  for (const GenSymbol& g : detail::slot_symbols(d, Rat(0), false))
    for (const GenSymbol& gp : detail::slot_symbols(d, Rat(0), false)) {
      TensorTerm pair{{g, gp}};
      LinComb<HSeries> in = delta_apply(
          d, l, lp, delta_apply(d, l, lp, detail::single(pair, N), 0), 2);
      LinComb<HSeries> got = in;
      got = s_apply(ctx, d, l, lp, got, 0, 3);
      got = s_apply(ctx, d, lp, lp, got, 1, 3);
      got = s_apply(ctx, d, l, l, got, 0, 2);
      got = s_apply(ctx, d, lp, l, got, 1, 2);
      LinComb<HSeries> expect = in;
      Rat n = Rat(d.b(gp.idx, g.idx));
      int eg = (g.k == GK::Xp) ? 1 : (g.k == GK::Xm) ? -1 : 0;
      int egp = (gp.k == GK::Xp) ? 1 : (gp.k == GK::Xm) ? -1 : 0;
      if (g.k == GK::H && gp.k == GK::H) {
        // the four pairings telescope to [n][rL](q^{rL}-q^{-rL}) = [n][rL]^2(q-q^{-1})
        HSeries s = apply_op(OpSeries::qbracket(n, N) *
                                 OpSeries::qbracket(rsum, N) * qmq_sum,
                             ctx.d2log);
        expect.add(TensorTerm{{GenSymbol::vac(), GenSymbol::vac(),
                               GenSymbol::vac(), GenSymbol::vac()}},
                   s);
      } else if (g.k == GK::H && egp != 0) {
        HSeries s = apply_op(OpSeries::qbracket(n, N) * qmq_sum, ctx.dlog);
        LinComb<HSeries> dgp = delta_apply(
            d, l, lp,
            detail::single(TensorTerm{{GenSymbol::vac(), GenSymbol::vac(), gp}},
                           N),
            2);
        for (auto& [unused, tc] : dgp.t)
          expect.add(tc.first, Rat(-egp) * (tc.second * s));
      } else if (eg != 0 && gp.k == GK::H) {
        HSeries s = apply_op(OpSeries::qbracket(n, N) * qmq_sum, ctx.dlog);
        LinComb<HSeries> dg = delta_apply(
            d, l, lp,
            detail::single(TensorTerm{{g, GenSymbol::vac(), GenSymbol::vac()}},
                           N),
            0);
        for (auto& [unused, tc] : dg.t)
          expect.add(tc.first, Rat(eg) * (tc.second * s));
      } else if (eg != 0 && egp != 0) {
        HSeries s = pow_gq(ctx.f, detail::qq(Rat(-eg * egp) * n));
        expect = LinComb<HSeries>();
        for (auto& [unused, tc] : in.t) expect.add(tc.first, tc.second * s);
      }
      rep.note(lc_eq(got, expect, min_window),
               "s-on-coproduct " + pair.key());
    }
  return rep;
}

}  // namespace qva
