// Acceptance gate: one line per criterion, tolerance zero on every certified
// coefficient.  Exit status is the number of failed criteria.
#include <chrono>
#include <iostream>
#include <random>
#include <set>

#include "qva/runner.hpp"

using namespace qva;

namespace {

int failures = 0;

void report(int num, bool pass, const std::string& what, double secs) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %-55s (%.1fs)\n", num,
              pass ? "PASS" : "FAIL", what.c_str(), secs);
  std::fflush(stdout);
}

template <class F>
void criterion(int num, const std::string& what, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string note = what;
  try {
    pass = body();
  } catch (const std::exception& ex) {
    note = what + " [exception: " + ex.what() + "]";
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  report(num, pass, note, secs);
}

std::mt19937 rng(20260824u);

Rat rand_rat() {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  return Rat(num(rng), den(rng));
}

QSeries rand_qseries(int cap) {
  std::uniform_int_distribution<int> v(0, 2);
  QSeries s(cap);
  s.val = v(rng);
  s.a.resize(cap - s.val + 1);
  for (auto& c : s.a) c = rand_rat();
  s.normalize();
  return s;
}

HSeries rand_hseries(int N) {
  HSeries s(N);
  std::uniform_int_distribution<int> e(-6, 12), nterms(1, 4);
  for (int k = 0; k <= N; ++k) {
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) s.set(k, e(rng), rand_rat());
  }
  s.prune();
  return s;
}

bool series_laws() {
  const int N = 8;
  int inputs = 0;
  bool ok = true;
  for (int it = 0; it < 12; ++it) {
    QSeries a = rand_qseries(N), b = rand_qseries(N), c = rand_qseries(N);
    inputs += 3;
    ok = ok && qs_eq((a + b) * c, a * c + b * c) &&
         qs_eq(a * (b * c), (a * b) * c);
  }
  for (int it = 0; it < 10; ++it) {
    HSeries a = rand_hseries(N), b = rand_hseries(N), c = rand_hseries(N);
    inputs += 3;
    ok = ok && hs_eq((a + b) * c, a * c + b * c) &&
         hs_eq(a * (b * c), (a * b) * c) &&
         hs_eq(subst_neg(a * b), subst_neg(a) * subst_neg(b)) &&
         hs_eq(derive(a * b), derive(a) * b + a * derive(b));
  }
  for (int it = 0; it < 8; ++it) {
    HSeries a = rand_hseries(N), b = rand_hseries(N);
    Rat c1 = rand_rat(), c2 = rand_rat();
    inputs += 2;
    ok = ok && hs_eq(shift_z(a * b, c1), shift_z(a, c1) * shift_z(b, c1), -6) &&
         hs_eq(shift_z(shift_z(a, c1), c2), shift_z(a, c1 + c2), -6) &&
         hs_eq(shift_z(derive(a), c1), derive(shift_z(a, c1)), -6);
  }
  // iterated twisted powers shed about three z-columns per hbar layer, so the
  // base kernel needs enough headroom to keep order-8 windows above the guard
  HSeries f = hs_f(N, 34);
  std::uniform_int_distribution<int> mm(-2, 2), aa(-2, 2);
  for (int it = 0; it < 4; ++it) {
    QExp g1, g2;
    for (int t = 0; t < 2; ++t) {
      g1.add_term(Rat(mm(rng)), Rat(aa(rng)));
      g2.add_term(Rat(mm(rng)), Rat(aa(rng)));
    }
    inputs += 2;
    HSeries p1 = pow_gq(f, g1), p2 = pow_gq(f, g2);
    long tot = rat_to_long(g1.at_q1(), "total weight");
    ok = ok && hs_eq(p1 * p2, pow_gq(f, g1 + g2), 5) &&
         hs_eq(pow_gq(p1, g2), pow_gq(f, g1 * g2), 5) &&
         hs_eq(subst_neg(p1), rat_pow(Rat(-1), tot) * pow_gq(f, qexp_bar(g1)),
               5);
  }
  return ok && inputs >= 50;
}

const std::vector<std::pair<Rat, Rat>>& level_grid() {
  static const std::vector<std::pair<Rat, Rat>> g = {
      {Rat(1), Rat(2)}, {Rat(1, 2), Rat(3)}, {Rat(1), Rat(0)}};
  return g;
}

std::vector<CartanDatum> data_grid() {
  return {cartan_A1(), cartan_A2(), cartan_B2()};
}

}  // namespace

int main() {
  criterion(1, "series kernel laws, randomized, order 8", series_laws);

  criterion(2, "cross-level smoothing identities, order 8", [] {
    const int N = 8, W = 16;
    for (const CartanDatum& d : data_grid())
      for (auto& [l, lp] : level_grid())
        if (!check_tech1(d, l, lp, wh_pair(d, l, lp, N, W), N, W, 4).pass)
          return false;
    return true;
  });

  criterion(3, "braiding unitarity on all generator pairs", [] {
    const int N = 6, W = 16;
    for (const CartanDatum& d : data_grid())
      for (auto& [l, lp] : level_grid())
        if (!check_unitarity(d, l, lp, N, W, 4).pass) return false;
    return true;
  });

  criterion(4, "Yang-Baxter identity on generator triples", [] {
    const int N = 6;
    return check_qyb(cartan_A1(), Rat(1), Rat(1), Rat(1), N, 24, 6, 2).pass &&
           check_qyb(cartan_A2(), Rat(1), Rat(2), Rat(3), N, 24, 6, 2).pass;
  });

  criterion(5, "coproduct intertwining and closed forms", [] {
    const int N = 6, W = 16;
    for (int side : {0, 1}) {
      if (!check_intertwine(cartan_A2(), side, Rat(1), Rat(2), Rat(3), N, W, 4)
               .pass)
        return false;
      if (!check_intertwine(cartan_B2(), side, Rat(1), Rat(1, 2), Rat(2), N, W,
                            4)
               .pass)
        return false;
    }
    return check_s_on_coproduct(cartan_A2(), Rat(1), Rat(2), N, W, 4).pass &&
           check_s_on_coproduct(cartan_B2(), Rat(1), Rat(3, 2), N, W, 4).pass;
  });

  criterion(6, "ordered-product coefficients vs oracle, k <= 6", [] {
    const int CAP = 40;
    std::vector<CartanDatum> data = {make_cartan({{2, 0}, {0, 2}}),
                                     cartan_A2(), cartan_B2(),
                                     make_cartan({{2, -3}, {-1, 2}})};
    auto suffix = [](long k, long t) {
      return ((1ul << (k + 1)) - 1) ^ ((1ul << t) - 1);
    };
    for (const CartanDatum& d : data)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (i == j) continue;
          for (long k = 0; k <= 6; ++k)
            for (long t = 0; t <= k; ++t) {
              QSeries oracle = serre_oracle(d, i, j, k, suffix(k, t), CAP);
              if (t % 2) oracle = -oracle;
              if (oracle.cap < 8) return false;
              if (!qs_eq(serre_coeff(d, i, j, k, t, CAP), oracle)) return false;
            }
          // support scan: survivors are exactly the admissible suffix sets
          for (long k = 0; k <= 5; ++k) {
            std::set<unsigned long> expect{0ul};
            for (long t = 0; t <= k; ++t) {
              long m = k + d.a(i, j);
              if (1 <= m && m <= t) continue;
              expect.insert(suffix(k, t));
            }
            std::vector<unsigned long> got = support_scan(d, i, j, k, 20);
            if (std::set<unsigned long>(got.begin(), got.end()) != expect)
              return false;
          }
          // vanishing at the Serre exponent
          if (d.a(i, j) == 0) continue;
          long m = d.m_serre(i, j);
          for (long t = 1; t <= m; ++t)
            if (!serre_coeff(d, i, j, m, t, CAP).is_zero()) return false;
        }
    return true;
  });

  criterion(7, "integrability coefficients vs oracle, k <= 6", [] {
    const int CAP = 40;
    for (const CartanDatum& d : {cartan_A2(), cartan_B2()})
      for (int i = 0; i < 2; ++i)
        for (long k = 0; k <= 6; ++k)
          for (long t = 0; t <= k; ++t) {
            QSeries a = int_coeff(d, i, k, t, CAP);
            QSeries b = int_oracle(d, i, k, t, CAP);
            if (a.cap < 8 || b.cap < 8) return false;
            if (!qs_eq(a, b)) return false;
          }
    return true;
  });

  criterion(8, "mode brackets: support, antisymmetry, classical limit", [] {
    const int N = 6;
    return check_brackets(cartan_A1(), Rat(1), 6, N).pass &&
           check_brackets(cartan_A2(), Rat(2), 6, N).pass &&
           check_brackets(cartan_B2(), Rat(3, 2), 6, N).pass;
  });

  criterion(9, "commutator suite, cutoff 4, degree 4, order 6", [] {
    return check_com_suite(cartan_A1(), Rat(1), 4, 4, 6, 16, 6, 4).pass;
  });

  criterion(10, "vertex operator of the exponentiated state", [] {
    return check_YE(cartan_A1(), Rat(1), 0, 4, 3, 6, 16, 4).pass;
  });

  criterion(11, "exponentiated-state coproduct: BCH and prefactors", [] {
    return check_e_coproduct(cartan_A1(), Rat(1), Rat(1), 6, 16).pass &&
           check_e_coproduct(cartan_A1(), Rat(1), Rat(0), 6, 16).pass;
  });

  criterion(12, "classical limits of braiding and coproduct", [] {
    const int N = 6, W = 16;
    return check_classical(cartan_A1(), Rat(1), Rat(1), N, W, 4).pass &&
           check_classical(cartan_A2(), Rat(1), Rat(2), N, W, 4).pass;
  });

  criterion(13, "negative control: corrupted components are detected", [] {
    const int N = 6, W = 16;
    CartanDatum d = cartan_A2();
    TauElement partner = wh_pair(d, Rat(2), Rat(1), N, W);
    for (int ch = 0; ch < 9; ++ch)
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) {
          TauElement x = wh_pair(d, Rat(1), Rat(2), N, W);
          corrupt_component(x, ch, i, j, Rat(1 + (long)(rng() % 7u)));
          bool caught = !check_tech1(d, Rat(1), Rat(2), x, N, W, 4).pass ||
                        !check_reflection(x, partner, 4).pass;
          if (!caught) return false;
        }
    return true;
  });

  std::printf("%s: %d of 13 criteria failed\n",
              failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures;
}
