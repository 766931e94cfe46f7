#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qva/biseries.hpp"
#include "qva/hseries.hpp"
#include "qva/qexp.hpp"
#include "qva/qseries.hpp"

using namespace qva;

namespace {

std::mt19937 rng(20260824u);

Rat rand_rat() {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  return Rat(num(rng), den(rng));
}

QSeries rand_qseries(int cap, int lo = 0) {
  std::uniform_int_distribution<int> v(lo, 2);
  QSeries s(cap);
  s.val = v(rng);
  s.a.resize(cap - s.val + 1);
  for (auto& c : s.a) c = rand_rat();
  s.normalize();
  return s;
}

// Random Laurent polynomial with z-exponents in [elo, ehi]; all layers exact
// except a finite certified window `win` is imposed when win < Z_INF.
HSeries rand_hseries(int N, int elo, int ehi, int win = Z_INF, bool laurent = true) {
  HSeries s(N);
  std::uniform_int_distribution<int> e(laurent ? elo : std::max(0, elo), ehi);
  std::uniform_int_distribution<int> nterms(1, 4);
  for (int k = 0; k <= N; ++k) {
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) s.set(k, e(rng), rand_rat());
    if (win < Z_INF) s.hi[k] = win;
  }
  s.prune();
  return s;
}

}  // namespace

TEST_CASE("hbar series ring and inversion") {
  const int cap = 10;
  for (int it = 0; it < 30; ++it) {
    QSeries a = rand_qseries(cap), b = rand_qseries(cap), c = rand_qseries(cap);
    CHECK(qs_eq((a + b) * c, a * c + b * c));
    CHECK(qs_eq(a * (b * c), (a * b) * c));
  }
  for (int it = 0; it < 20; ++it) {
    QSeries a = rand_qseries(cap);
    a.val = 0;
    if (a.a.empty() || a.a[0] == 0) a.a.assign(1, Rat(1));
    QSeries inv = qs_invert(a);
    // long-division oracle: certified part of a * a^-1 is exactly 1
    CHECK(qs_eq(a * inv, QSeries::one(inv.cap)));
  }
}

TEST_CASE("hbar series transcendental round trips") {
  const int cap = 9;
  for (int it = 0; it < 15; ++it) {
    QSeries y = rand_qseries(cap, 1);  // divisible by hbar
    CHECK(qs_eq(qs_log(qs_exp(y)), y));
    QSeries u = QSeries::one(cap) + y;
    CHECK(qs_eq(qs_exp(qs_log(u)), u));
    QSeries s = qs_sqrt(u);
    CHECK(qs_eq(s * s, u));
  }
}

TEST_CASE("q-integers agree with the finite q-power sums") {
  const int cap = 10;
  // [2]_q = q + q^{-1}: 2 + h^2 + h^4/12 + ...
  QSeries two = qnum(Rat(2), cap);
  CHECK(two.at(0) == 2);
  CHECK(two.at(1) == 0);
  CHECK(two.at(2) == 1);
  CHECK(two.at(4) == Rat(1, 12));
  for (long n = -5; n <= 5; ++n)
    CHECK(qs_eq(qnum(Rat(n), cap), qexp_eval(qexp_qint(n), cap)));
  // symmetry q -> q^-1: only even hbar orders survive
  QSeries half = qnum(Rat(5, 2), cap);
  for (int k = 1; k <= cap; k += 2) CHECK(half.at(k) == 0);
  // base change consistency: [n]_{q^b} at b=1
  CHECK(qs_eq(qnum_base(Rat(3), Rat(1), cap), qnum(Rat(3), cap)));
}

TEST_CASE("bivariate ring laws and certified windows") {
  const int N = 5;
  for (int it = 0; it < 25; ++it) {
    HSeries a = rand_hseries(N, -3, 5), b = rand_hseries(N, -3, 5),
            c = rand_hseries(N, -3, 5);
    CHECK(hs_eq((a + b) * c, a * c + b * c));
    CHECK(hs_eq(a * (b * c), (a * b) * c));
    CHECK(hs_eq(subst_neg(a * b), subst_neg(a) * subst_neg(b)));
    // Leibniz
    CHECK(hs_eq(derive(a * b), derive(a) * b + a * derive(b)));
  }
  // windows: multiplying by something certified only through z^3 cannot
  // certify higher than floor+3
  HSeries a = rand_hseries(N, 0, 2, 3);
  HSeries b = rand_hseries(N, 1, 2);
  HSeries p = a * b;
  for (int k = 0; k <= N; ++k) CHECK(p.hi[k] <= 3 + 1);
}

TEST_CASE("shifts are ring homomorphisms and compose additively") {
  const int N = 5;
  for (int it = 0; it < 12; ++it) {
    HSeries a = rand_hseries(N, -2, 4, 10), b = rand_hseries(N, -2, 4, 10);
    Rat c1 = rand_rat(), c2 = rand_rat();
    CHECK(hs_eq(shift_z(a * b, c1), shift_z(a, c1) * shift_z(b, c1), -2));
    CHECK(hs_eq(shift_z(shift_z(a, c1), c2), shift_z(a, c1 + c2), -2));
    CHECK(hs_eq(shift_z(derive(a), c1), derive(shift_z(a, c1)), -3));
  }
}

TEST_CASE("inverse, sqrt, exp and log on z series") {
  const int N = 5, W = 14;
  HSeries f = hs_f(N, W);
  CHECK(hs_eq(hs_invert(f) * f, HSeries::one(N), 6));
  HSeries f0 = hs_f0(N, W);
  HSeries s = hs_sqrt(f0);
  CHECK(hs_eq(s * s, f0, 8));
  CHECK(hs_eq(hs_exp_log(hs_log(f)), f, 8));
  // d/dz log f has the simple pole z^-1 + regular part
  HSeries dl = hs_dlog_f(N, W);
  CHECK(dl.at(0, -1) == 1);
  CHECK(dl.at(0, 0) == 0);
  CHECK(dl.at(0, 1) == Rat(1, 12));
  // residue of any derivative vanishes
  for (int it = 0; it < 10; ++it) {
    HSeries a = rand_hseries(N, -4, 4);
    QSeries r = residue(derive(a));
    CHECK(r.is_zero());
  }
}

TEST_CASE("log marker survives shifts and derivatives") {
  const int N = 5, W = 12;
  HSeries lf = hs_log_f(N, W);
  CHECK(lf.logz == 1);
  Rat c(3, 2);
  CHECK(hs_eq(shift_z(lf, c), hs_log(shift_z(hs_f(N, W), c)), 6));
  CHECK(hs_eq(derive(shift_z(lf, c)), shift_z(derive(lf), c), 5));
}

TEST_CASE("twisted powers obey the group laws") {
  const int N = 6, W = 22;
  HSeries f = hs_f(N, W);
  // q^m twist is the plain shift; constant exponent 2 is the square
  CHECK(hs_eq(pow_gq(f, QExp::qpow(Rat(1))), shift_z(f, Rat(1)), 8));
  CHECK(hs_eq(pow_gq(f, QExp::term(Rat(0), Rat(2))), f * f, 8));
  std::uniform_int_distribution<int> mm(-2, 2), aa(-2, 2);
  for (int it = 0; it < 6; ++it) {
    QExp g1, g2;
    for (int t = 0; t < 2; ++t) {
      g1.add_term(Rat(mm(rng)), Rat(aa(rng)));
      g2.add_term(Rat(mm(rng)), Rat(aa(rng)));
    }
    HSeries p1 = pow_gq(f, g1), p2 = pow_gq(f, g2);
    CHECK(hs_eq(p1 * p2, pow_gq(f, g1 + g2), 5));
    // iterated twist multiplies exponents
    CHECK(hs_eq(pow_gq(p1, g2), pow_gq(f, g1 * g2), 5));
    // reflection z -> -z conjugates q -> q^-1 and picks up (-1)^{g(1)}
    long tot = rat_to_long(g1.at_q1(), "total weight");
    CHECK(hs_eq(subst_neg(p1), rat_pow(Rat(-1), tot) * pow_gq(f, qexp_bar(g1)), 5));
  }
}

TEST_CASE("q-bracket operator equals the finite shift sum") {
  const int N = 6;
  for (int it = 0; it < 50; ++it) {
    HSeries a = rand_hseries(N, -4, 6, 12);
    std::uniform_int_distribution<int> nn(1, 4);
    int n = nn(rng);
    HSeries lhs = apply_op(OpSeries::qbracket(Rat(n), N), a);
    HSeries rhs = HSeries::zero(N);
    for (int k = 0; k < n; ++k) rhs = rhs + shift_z(a, Rat(n - 1 - 2 * k));
    CHECK(hs_eq(lhs, rhs, -4));
    // antisymmetry and normalization
    CHECK(hs_eq(apply_op(OpSeries::qbracket(Rat(-n), N), a), -lhs, -4));
    CHECK(hs_eq(apply_op(OpSeries::qbracket(Rat(1), N), a), a, -4));
  }
}

TEST_CASE("two-variable expansions") {
  const int N = 4;
  // polynomial oracle: (z1 - z2)^3 expanded binomially
  HSeries z3 = HSeries::monomial(N, 3, 0, Rat(1));
  BiSeries e = expand_region(z3, BiMode::Diff12, 6);
  for (int m = 0; m <= 3; ++m) {
    HSeries expect = HSeries::monomial(N, 3 - m, 0, ((m % 2) ? Rat(-1) : Rat(1)) * binom(3, m));
    CHECK(hs_eq(e.get(m), expect));
  }
  CHECK(e.get(4).is_zero());
  // the two expansions of 1/(z1 - z2)
  HSeries zi = HSeries::monomial(N, -1, 0, Rat(1));
  BiSeries e12 = expand_region(zi, BiMode::Diff12, 5);
  BiSeries e21 = expand_region(zi, BiMode::Diff21, 5);
  for (int m = 0; m <= 5; ++m) {
    CHECK(hs_eq(e12.get(m), HSeries::monomial(N, -1 - m, 0, Rat(1))));
    CHECK(hs_eq(e21.get(m), HSeries::monomial(N, -1 - m, 0, Rat(-1))));
  }
  // expansion is a ring homomorphism
  for (int it = 0; it < 8; ++it) {
    HSeries a = rand_hseries(N, -2, 4, 9), b = rand_hseries(N, -2, 4, 9);
    for (BiMode mode : {BiMode::Diff12, BiMode::Sum12, BiMode::Diff21}) {
      BiSeries lhs = expand_region(a, mode, 4) * expand_region(b, mode, 4);
      BiSeries rhs = expand_region(a * b, mode, 4);
      CHECK(bs_eq(lhs, rhs, 3, -4));
    }
  }
  // mixing regions must throw
  CHECK_THROWS(bi_region_meet(BR_12, BR_21));
  // functions of one variable embed compatibly: s(z1) * t(z2) two ways
  HSeries s = rand_hseries(N, 0, 3), t = rand_hseries(N, 0, 3);
  BiSeries prod = embed_primary(s) * embed_secondary(t);
  for (int m = 0; m <= 3; ++m) {
    HSeries expect = HSeries::zero(N);
    for (int k = 0; k <= N; ++k)
      expect = expect + t.at(k, m) * (HSeries::monomial(N, 0, k, Rat(1)) * s);
    CHECK(hs_eq(prod.get(m), expect));
  }
  CHECK(prod.w_cap >= 3);
}
