#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qva/structconst.hpp"

using namespace qva;

namespace {

const int CAP = 40;  // generous base window; products with inverses shrink it

// bitmask for the suffix subset {t+1 .. k+1} of {1 .. k+1}
unsigned long suffix_mask(long k, long t) {
  return ((1ul << (k + 1)) - 1) ^ ((1ul << t) - 1);
}

// rank-2 matrices covering a_ij in {0,-1,-2,-3} with both orientations
std::vector<CartanDatum> test_data() {
  return {make_cartan({{2, 0}, {0, 2}}), cartan_A2(), cartan_B2(),
          make_cartan({{2, -3}, {-1, 2}})};
}

}  // namespace

TEST_CASE("q-binomials: classical limit, symmetry, vanishing range") {
  for (long n = 0; n <= 8; ++n)
    for (long t = 0; t <= 8; ++t) {
      QSeries qb = q_binom(n, t, Rat(1), 10);
      CHECK(qb.at(0) == binom(n, t));
      if (t <= n) CHECK(qs_eq(qb, q_binom(n, n - t, Rat(1), 10)));
      if (t > n) CHECK(qb.is_zero());
    }
  // negative upper argument: [-1 choose t] = (-1)^t exactly in base q
  for (long t = 0; t <= 4; ++t) {
    QSeries qb = q_binom(-1, t, Rat(2), 10);
    QSeries expect = QSeries::from_rat(Rat((t % 2) ? -1 : 1), 10);
    // [-1]...[-t] = (-1)^t [1]...[t] cancels the factorial
    CHECK(qs_eq(qb, expect));
  }
  CHECK(qs_eq(q_factorial(3, Rat(1), 8),
              qnum(Rat(2), 8) * qnum(Rat(3), 8)));
}

TEST_CASE("ordered-product coefficients match the closed form") {
  for (const CartanDatum& d : test_data())
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == j) continue;
        for (long k = 0; k <= 6; ++k)
          for (long t = 0; t <= k; ++t) {
            QSeries closed = serre_coeff(d, i, j, k, t, CAP);
            QSeries oracle = serre_oracle(d, i, j, k, suffix_mask(k, t), CAP);
            if (t % 2) oracle = -oracle;
            CHECK(oracle.cap >= 8);  // no vacuous window
            CHECK(qs_eq(closed, oracle));
          }
      }
}

TEST_CASE("support scan: survivors are the vacuum set and admissible suffixes") {
  for (const CartanDatum& d : test_data())
    for (long k = 0; k <= 5; ++k) {
      int i = 0, j = 1;
      std::set<unsigned long> expect{0ul};
      for (long t = 0; t <= k; ++t) {
        long m = k + d.a(i, j);
        if (1 <= m && m <= t) continue;  // the closed form vanishes there too
        expect.insert(suffix_mask(k, t));
      }
      std::vector<unsigned long> got = support_scan(d, i, j, k, 20);
      CHECK(std::set<unsigned long>(got.begin(), got.end()) == expect);
    }
}

TEST_CASE("vanishing at the Serre exponent") {
  for (const CartanDatum& d : test_data())
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == j || d.a(i, j) == 0) continue;
        long k = d.m_serre(i, j);
        for (long t = 1; t <= k; ++t)
          CHECK(serre_coeff(d, i, j, k, t, CAP).is_zero());
        CHECK(qs_eq(serre_coeff(d, i, j, k, 0, CAP), QSeries::one(CAP)));
      }
}

TEST_CASE("integrability coefficients match the expansion oracle") {
  for (const CartanDatum& d : {cartan_A2(), cartan_B2()})
    for (int i = 0; i < 2; ++i)
      for (long k = 0; k <= 6; ++k)
        for (long t = 0; t <= k; ++t) {
          QSeries closed = int_coeff(d, i, k, t, CAP);
          QSeries oracle = int_oracle(d, i, k, t, CAP);
          CHECK(closed.cap >= 8);
          CHECK(oracle.cap >= 8);
          CHECK(qs_eq(closed, oracle));
          // classical limit is the plain binomial coefficient
          CHECK(closed.at(0) == binom(k, t));
        }
}

TEST_CASE("integrability endpoints") {
  CartanDatum d = cartan_B2();
  for (int i = 0; i < 2; ++i)
    for (long k = 1; k <= 6; ++k) {
      CHECK(qs_eq(int_coeff(d, i, k, 0, CAP), QSeries::one(CAP)));
      // the t = k coefficient is exactly 1: the two binomial zeros cancel
      CHECK(qs_eq(int_coeff(d, i, k, k, CAP), QSeries::one(CAP)));
      CHECK(int_support_is_suffix_only(d, i, k, 10));
    }
}

TEST_CASE("closure scans pass on the standard data") {
  for (const CartanDatum& d : {cartan_A1(), cartan_A2(), cartan_B2()}) {
    ClosureReport rep = closure_checks(d, Rat(2), 24);
    if (!rep.pass)
      for (auto& s : rep.failures) MESSAGE(s);
    CHECK(rep.pass);
  }
}
