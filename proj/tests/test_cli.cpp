#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qva/runner.hpp"

using namespace qva;

TEST_CASE("suite registry and config validation") {
  CHECK(suite_registry().size() == 11);

  nlohmann::json bad1 = {{"truncation", {{"hbar_order", 1}}}};
  CHECK_THROWS_AS(parse_config(bad1), std::invalid_argument);
  nlohmann::json bad2 = {{"truncation", {{"z_window", 0}}}};
  CHECK_THROWS_AS(parse_config(bad2), std::invalid_argument);
  nlohmann::json bad3 = {{"suites", {"no-such-suite"}}};
  CHECK_THROWS_AS(parse_config(bad3), std::invalid_argument);
  nlohmann::json bad4 = {{"levels", nlohmann::json::array()}};
  CHECK_THROWS_AS(parse_config(bad4), std::invalid_argument);

  RunConfig c = parse_config(nlohmann::json::object());
  CHECK(c.trunc.hbar_order >= 2);
  CHECK(c.datum_name == "A1");
  CHECK(rat_parse("3/2") == Rat(3, 2));
  CHECK(rat_str(Rat(-5, 3)) == "-5/3");
}

TEST_CASE("runner passes on the default datum and reports are deterministic") {
  nlohmann::json j = {
      {"cartan", "A1"},
      {"levels", {"1", "2"}},
      {"suites", {"tau-tech1", "serre", "integrability", "classical-limit"}}};
  RunConfig cfg = parse_config(j);
  Report a = run_suite(cfg);
  CHECK(a.failed == 0);
  CHECK(a.skipped == 0);
  CHECK(a.passed > 0);
  CHECK(a.passed == (int)a.entries.size());

  Report b = run_suite(cfg);
  CHECK(report_json(a, cfg).dump(2) == report_json(b, cfg).dump(2));
}

TEST_CASE("seeded corruption fixture trips the tau suite") {
  nlohmann::json j = {{"cartan", "A2"},
                      {"levels", {"1", "2"}},
                      {"suites", {"tau-tech1"}},
                      {"variants", {{"corrupt-tau", true}}}};
  // every seed lands on some component; all of them must be detected
  for (unsigned seed : {1u, 7u, 23u, 101u, 3000u}) {
    RunConfig cfg = parse_config(j);
    cfg.seed = seed;
    Report rep = run_suite(cfg);
    CHECK(rep.failed > 0);
  }
}

TEST_CASE("every corrupted channel is caught by smoothing or reflection") {
  CartanDatum d = cartan_A2();
  const int N = 6, W = 16;
  TauElement partner = wh_pair(d, Rat(2), Rat(1), N, W);
  for (int ch = 0; ch < 9; ++ch)
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) {
        TauElement x = wh_pair(d, Rat(1), Rat(2), N, W);
        corrupt_component(x, ch, i, j, Rat(1));
        bool caught = !check_tech1(d, Rat(1), Rat(2), x, N, W, 4).pass ||
                      !check_reflection(x, partner, 4).pass;
        CHECK(caught);
      }
}

TEST_CASE("alternative bracket base: same on symmetric data, detected on B2") {
  const int N = 6, W = 16;
  RunConfig cfg = parse_config(nlohmann::json{
      {"cartan", "A2"},
      {"levels", {"1", "2"}},
      {"suites", {"tau-tech1"}},
      {"variants", {{"bracket-base-ri", true}}}});
  Report rep = run_suite(cfg);
  CHECK(rep.failed == 0);  // all r_i = 1: conventions coincide

  CartanDatum b2 = cartan_B2();
  TauElement v = wh_pair_base_ri(b2, Rat(1), Rat(2), N, W);
  TauElement w = wh_pair(b2, Rat(1), Rat(2), N, W);
  // genuinely different element on asymmetric data, and only the plain-base
  // convention satisfies the smoothing identities
  CHECK_FALSE(hs_eq(v.t[v.idx(1, 0)], w.t[w.idx(1, 0)], 4));
  CHECK_FALSE(check_tech1(b2, Rat(1), Rat(2), v, N, W, 4).pass);
  CHECK(check_tech1(b2, Rat(1), Rat(2), w, N, W, 4).pass);
}

TEST_CASE("tabulators: closed-form rows") {
  // the x+x- diagonal channel of the level element is z^-1 (z + 2 hbar)
  auto rows = tabulate_tau(cartan_A1(), Rat(1), 6, 14, -4, 6);
  int hits = 0;
  for (auto& r : rows) {
    if (r[0] == "x+x-" && r[1] == "0" && r[2] == "0") {
      ++hits;
      bool constant = (r[3] == "0" && r[4] == "0" && r[5] == "1");
      bool pole = (r[3] == "1" && r[4] == "-1" && r[5] == "2");
      CHECK((constant || pole));
    }
  }
  CHECK(hits == 2);

  auto sr = tabulate_serre(cartan_A2(), 0, 1, 0, 24);
  REQUIRE(sr.size() == 2);  // header plus the single k=0 row
  CHECK(sr[1] == std::vector<std::string>{"0", "0", "0", "1"});

  auto ir = tabulate_integrability(cartan_A1(), 0, 2, 24);
  CHECK(ir.size() > 2);
  CHECK(ir[0] == std::vector<std::string>{"k", "t", "hbar_order", "value"});

  auto br = tabulate_brackets(cartan_A1(), Rat(1), 3, 6);
  CHECK(br[0] ==
        std::vector<std::string>{"i", "j", "m", "hbar_order", "value"});
  // classical diagonal residue m * r_i a_ii * r l = 2 at m = 1
  bool found = false;
  for (auto& r : br)
    if (r == std::vector<std::string>{"0", "0", "1", "0", "2"}) found = true;
  CHECK(found);

  auto pr = print_series_rows("dlogf", 6, 12, -2, 4);
  bool simple_pole = false;
  for (auto& r : pr)
    if (r[0] == "dlogf" && r[1] == "0" && r[2] == "-1" && r[3] == "1")
      simple_pole = true;
  CHECK(simple_pole);
  CHECK_THROWS_AS(print_series_rows("nope", 6, 12, -2, 4),
                  std::invalid_argument);
}

TEST_CASE("aligned table rendering matches the csv rows") {
  std::vector<std::vector<std::string>> rows = {{"a", "bb"}, {"ccc", "d"}};
  std::ostringstream csv, txt;
  runner_detail::write_table(rows, csv, txt);
  CHECK(csv.str() == "a,bb\nccc,d\n");
  CHECK(txt.str() == "a    bb\nccc  d\n");
}
