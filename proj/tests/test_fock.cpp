#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qva/fock.hpp"

using namespace qva;

namespace {

const int N = 6;   // hbar layers
const int W = 16;  // base z-window for the one-variable series
const int MINZ = 4;
const int MINW = 6;

void report_ok(const FockReport& rep) {
  for (auto& s : rep.failures) MESSAGE(s);
  CHECK(rep.pass);
  CHECK(rep.cases > 0);
}

}  // namespace

TEST_CASE("mode brackets: classical delta diagonal plus pairing correction") {
  report_ok(check_brackets(cartan_A1(), Rat(1), 6, N));
  report_ok(check_brackets(cartan_A2(), Rat(2), 6, N));
  report_ok(check_brackets(cartan_B2(), Rat(3, 2), 6, N));

  ModeAlgebra ma = derive_brackets(cartan_A2(), Rat(2), 6, N);
  // diagonal residues stay classical at every hbar order
  CHECK(qs_eq(ma.cmode(0, 1, 3), QSeries::from_rat(Rat(-6), N)));
  CHECK(qs_eq(ma.cmode(0, 0, 2), QSeries::from_rat(Rat(8), N)));
  // the off-diagonal correction is a genuine deformation: the raw kernel
  // residues are not literally delta-supported
  CHECK_FALSE(ma.delta_supported);

  report_ok(check_bracket_additivity(cartan_A2(), Rat(1), Rat(2), 6, N));
}

TEST_CASE("level dependence of the brackets is not vacuous") {
  ModeAlgebra a = derive_brackets(cartan_A1(), Rat(1), 4, N);
  ModeAlgebra b = derive_brackets(cartan_A1(), Rat(2), 4, N);
  CHECK_FALSE(qs_eq(a.cmode(0, 0, 1), b.cmode(0, 0, 1)));
}

TEST_CASE("elementary mode actions") {
  ModeAlgebra ma = derive_brackets(cartan_A2(), Rat(1), 4, N);
  FVec<QSeries> vac = FVec<QSeries>::vacuum(QSeries::one(N));

  // annihilation kills the vacuum
  CHECK(act_mode(ma, 0, 2, vac).is_zero());
  CHECK(act_mode(ma, 1, 0, vac).is_zero());

  // contraction against a single creation reproduces the bracket scalar
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int m = 1; m <= 4; ++m) {
        FVec<QSeries> v = act_mode(ma, i, m, act_mode(ma, j, -m, vac));
        CHECK(fv_eq(v, fv_scale(ma.cmode(i, j, m), vac), N));
      }

  // the canonical derivation raises the mode with weight m
  FVec<QSeries> v = act_mode(ma, 0, -2, vac);
  FVec<QSeries> want = fv_scale(Rat(2), act_mode(ma, 0, -3, vac));
  CHECK(fv_eq(act_derivation(v), want, N));
}

TEST_CASE("exponentiated state reduces to the vacuum classically") {
  CartanDatum d = cartan_A1();
  TauElement whl = wh_ell(d, Rat(1), N, W);
  FVec<QSeries> E = build_E(d, Rat(1), 0, whl, N);
  bool saw_vac = false;
  for (auto& [k, mc] : E.t) {
    if (mc.first.f.empty()) {
      saw_vac = true;
      CHECK(mc.second.at(0) == 1);
    } else {
      CHECK(mc.second.at(0) == 0);
    }
  }
  CHECK(saw_vac);
}

TEST_CASE("commutator suite for the current halves") {
  report_ok(check_com_suite(cartan_A1(), Rat(1), 4, 4, N, W, MINW, MINZ));
  report_ok(check_com_suite(cartan_A2(), Rat(1), 2, 2, N, W, MINW, MINZ));
}

TEST_CASE("vertex operator of the exponentiated state") {
  report_ok(check_YE(cartan_A1(), Rat(1), 0, 4, 3, N, W, MINZ));
}

TEST_CASE("coproduct of exponentiated states on the tensor square") {
  report_ok(check_e_coproduct(cartan_A1(), Rat(1), Rat(1), N, W));
  report_ok(check_e_coproduct(cartan_A1(), Rat(1), Rat(0), N, W));
}
