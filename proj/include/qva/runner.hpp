#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qva/fock.hpp"
#include "qva/genspace.hpp"
#include "qva/structconst.hpp"
#include "qva/tau.hpp"

namespace qva {

// =============================================================================
// Configuration-driven runner: maps named verification suites onto the module
// checks, collects per-case certificates into a deterministic JSON report, and
// exposes the CSV tabulators.
// =============================================================================

inline std::string rat_str(const Rat& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

struct Truncation {
  int hbar_order = 6;
  int z_window = 16;
  int bivar_cap = 6;
  int mode_cutoff = 3;
  int degree_cutoff = 3;
};

struct RunConfig {
  CartanDatum datum;
  std::string datum_name = "A1";
  std::vector<Rat> levels = {Rat(1), Rat(2), Rat(3)};
  Truncation trunc;
  std::vector<std::string> suites;  // empty = whole registry
  std::map<std::string, bool> variants;
  unsigned seed = 20260824u;
  bool timings = false;
  std::string output;
};

inline const std::vector<std::string>& suite_registry() {
  static const std::vector<std::string> reg = {
      "tau-tech1",  "unitarity",     "qyb",
      "intertwine", "s-delta",       "serre",
      "integrability", "fock-com",   "fock-YE",
      "fock-e-coproduct", "classical-limit"};
  return reg;
}

struct CaseEntry {
  std::string suite;
  std::string id;
  std::string status;  // pass | fail | skipped
  std::string reason;  // failure/skip detail, empty when passing
  int hbar_order = 0;
  int z_window = 0;
  long wall_ms = 0;
};

struct Report {
  std::string version = "0.1.0";
  std::vector<CaseEntry> entries;
  int passed = 0, failed = 0, skipped = 0;
  bool all_pass() const { return failed == 0 && skipped == 0; }
};

// -----------------------------------------------------------------------------
// Config parsing and validation.
// -----------------------------------------------------------------------------
inline CartanDatum cartan_by_name(const std::string& name) {
  if (name == "A1") return cartan_A1();
  if (name == "A2") return cartan_A2();
  if (name == "B2") return cartan_B2();
  throw std::invalid_argument("unknown Cartan datum name: " + name);
}

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("cartan")) {
    if (j["cartan"].is_string()) {
      c.datum_name = j["cartan"].get<std::string>();
      c.datum = cartan_by_name(c.datum_name);
    } else {
      std::vector<std::vector<long>> A =
          j["cartan"].at("matrix").get<std::vector<std::vector<long>>>();
      long r = j["cartan"].value("r", 1l);
      c.datum = make_cartan(A, r);
      c.datum_name = "custom";
    }
  } else {
    c.datum = cartan_by_name(c.datum_name);
  }
  if (j.contains("levels")) {
    c.levels.clear();
    for (auto& v : j["levels"]) {
      if (v.is_number_integer())
        c.levels.push_back(Rat(v.get<long>()));
      else
        c.levels.push_back(rat_parse(v.get<std::string>()));
    }
    if (c.levels.empty()) throw std::invalid_argument("levels must be nonempty");
  }
  if (j.contains("truncation")) {
    const auto& t = j["truncation"];
    c.trunc.hbar_order = t.value("hbar_order", c.trunc.hbar_order);
    c.trunc.z_window = t.value("z_window", c.trunc.z_window);
    c.trunc.bivar_cap = t.value("bivar_cap", c.trunc.bivar_cap);
    c.trunc.mode_cutoff = t.value("mode_cutoff", c.trunc.mode_cutoff);
    c.trunc.degree_cutoff = t.value("degree_cutoff", c.trunc.degree_cutoff);
  }
  if (c.trunc.hbar_order < 2)
    throw std::invalid_argument("hbar_order must be at least 2");
  if (c.trunc.z_window <= 0 || c.trunc.bivar_cap <= 0 ||
      c.trunc.mode_cutoff <= 0 || c.trunc.degree_cutoff <= 0)
    throw std::invalid_argument("all truncation caps must be positive");
  if (j.contains("suites")) {
    for (auto& s : j["suites"]) {
      std::string name = s.get<std::string>();
      const auto& reg = suite_registry();
      if (std::find(reg.begin(), reg.end(), name) == reg.end())
        throw std::invalid_argument("unknown suite: " + name);
      c.suites.push_back(name);
    }
  }
  if (j.contains("variants"))
    for (auto& [k, v] : j["variants"].items()) c.variants[k] = v.get<bool>();
  c.seed = j.value("seed", c.seed);
  c.timings = j.value("timings", c.timings);
  c.output = j.value("output", c.output);
  return c;
}

// -----------------------------------------------------------------------------
// Classical-limit suite: at hbar = 0 the braiding is the identity and the
// coproduct degenerates to the additive split g -> g (x) 1 + 1 (x) g (with the
// exponentiated correction collapsing to the vacuum).
// -----------------------------------------------------------------------------
inline GenReport check_classical(const CartanDatum& d, const Rat& l,
                                 const Rat& lp, int N, int W, int min_window) {
  GenReport rep;
  SContext ctx(N, W);
  for (const GenSymbol& v : detail::slot_symbols(d, l, true))
    for (const GenSymbol& u : detail::slot_symbols(d, lp, true)) {
      TensorTerm t{{v, u}};
      LinComb<HSeries> in = detail::single(t, N);
      LinComb<HSeries> out = s_apply(ctx, d, l, lp, in, 0, 1);
      rep.note(lc_eq(classical_limit(out), classical_limit(in), min_window),
               "classical-braiding " + t.key());
    }
  for (int i = 0; i < d.n; ++i)
    for (const GenSymbol& g :
         {GenSymbol::h(i), GenSymbol::x(i, 1), GenSymbol::x(i, -1)}) {
      LinComb<HSeries> got = classical_limit(
          delta_apply(d, l, lp, detail::single(TensorTerm{{g}}, N), 0));
      LinComb<HSeries> want;
      want.add(TensorTerm{{g, GenSymbol::vac()}}, HSeries::one(N));
      want.add(TensorTerm{{GenSymbol::vac(), g}}, HSeries::one(N));
      rep.note(lc_eq(got, classical_limit(want), min_window),
               "classical-coproduct " + g.key());
    }
  return rep;
}

// -----------------------------------------------------------------------------
// Seeded corruption fixture: perturb one component of a deformation tuple by
// an odd monomial so neither the smoothing identities nor the reflection
// pairing can absorb it.  Channel 0 is h-h, 1..4 the h-x kinds/signs, 5..8 the
// multiplicative channels.
// -----------------------------------------------------------------------------
inline void corrupt_component(TauElement& x, int channel, int i, int j,
                              const Rat& eps) {
  HSeries bump = HSeries::monomial(x.N, 1, 1, eps);
  int ij = x.idx(i, j);
  switch (channel) {
    case 0: x.t[ij] = x.t[ij] + bump; break;
    case 1: x.t1[0][ij] = x.t1[0][ij] + bump; break;
    case 2: x.t1[1][ij] = x.t1[1][ij] + bump; break;
    case 3: x.t2[0][ij] = x.t2[0][ij] + bump; break;
    case 4: x.t2[1][ij] = x.t2[1][ij] + bump; break;
    case 5: x.e[0][0][ij] = x.e[0][0][ij] + bump; break;
    case 6: x.e[0][1][ij] = x.e[0][1][ij] + bump; break;
    case 7: x.e[1][0][ij] = x.e[1][0][ij] + bump; break;
    case 8: x.e[1][1][ij] = x.e[1][1][ij] + bump; break;
    default: throw std::domain_error("corrupt_component: bad channel");
  }
}

// The cross-level element with the alternative bracket-base convention: the
// Cartan-pairing bracket [r_i a_ij] is taken in base q^{r_i} instead of q.
// The two conventions agree whenever every r_i = 1.
inline TauElement wh_pair_base_ri(const CartanDatum& d, const Rat& ell,
                                  const Rat& ellp, int N, int W) {
  TauElement r = wh_pair(d, ell, ellp, N, W);
  Rat rl = Rat(d.r) * ell, rlp = Rat(d.r) * ellp;
  HSeries dlog = hs_dlog_f(N, W + 2);
  HSeries d2log = hs_d2log_f(N, W + 2);
  OpSeries qm1_minus_q =
      op_sub(OpSeries::shift(Rat(-1), N), OpSeries::shift(Rat(1), N));
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      int ij = r.idx(i, j);
      OpSeries bi(0, qnum_base(Rat(d.b(i, j)), Rat(d.ri[i]), N));
      OpSeries bj(0, qnum_base(Rat(d.b(j, i)), Rat(d.ri[j]), N));
      r.t[ij] = apply_op(bi * OpSeries::qbracket(rl, N) *
                             OpSeries::qbracket(rlp, N) * qm1_minus_q,
                         d2log);
      OpSeries op1 = bi * OpSeries::qbracket(rlp, N) * (Rat(-1) * qm1_minus_q);
      OpSeries op2 = bj * OpSeries::qbracket(rl, N) * (Rat(-1) * qm1_minus_q);
      HSeries v1 = apply_op(op1, dlog), v2 = apply_op(op2, dlog);
      for (int s = 0; s < 2; ++s) {
        r.t1[s][ij] = v1;
        r.t2[s][ij] = v2;
      }
    }
  return r;
}

// -----------------------------------------------------------------------------
// Suite execution.
// -----------------------------------------------------------------------------
namespace runner_detail {

struct SuiteOutcome {
  std::vector<CaseEntry> entries;
};

inline void push(SuiteOutcome& out, const std::string& suite,
                 const std::string& id, bool pass,
                 const std::vector<std::string>& failures, int hbar, int win) {
  CaseEntry e;
  e.suite = suite;
  e.id = id;
  e.status = pass ? "pass" : "fail";
  if (!pass) {
    std::string r;
    for (size_t k = 0; k < failures.size() && k < 4; ++k) {
      if (k) r += "; ";
      r += failures[k];
    }
    if (failures.size() > 4) r += "; ...";
    e.reason = r;
  }
  e.hbar_order = hbar;
  e.z_window = win;
  out.entries.push_back(e);
}

inline void push_skip(SuiteOutcome& out, const std::string& suite,
                      const std::string& id, const std::string& why) {
  CaseEntry e;
  e.suite = suite;
  e.id = id;
  e.status = "skipped";
  e.reason = why;
  out.entries.push_back(e);
}

inline std::string lvl_tag(const std::vector<Rat>& v) {
  std::string s = "(";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += rat_str(v[k]);
  }
  return s + ")";
}

}  // namespace runner_detail

inline runner_detail::SuiteOutcome run_one_suite(const std::string& name,
                                                 const RunConfig& c) {
  using runner_detail::push;
  using runner_detail::push_skip;
  runner_detail::SuiteOutcome out;
  const CartanDatum& d = c.datum;
  int N = c.trunc.hbar_order, W = c.trunc.z_window;
  const int MINZ = 4;
  auto level = [&](size_t k) { return c.levels[std::min(k, c.levels.size() - 1)]; };
  Rat l0 = level(0), l1 = level(1), l2 = level(2);
  auto variant = [&](const std::string& v) {
    auto it = c.variants.find(v);
    return it != c.variants.end() && it->second;
  };
  auto guarded = [&](const std::string& id, auto&& body) {
    try {
      body();
    } catch (const std::exception& ex) {
      push_skip(out, name, id, ex.what());
    }
  };

  if (name == "tau-tech1") {
    std::string tag = runner_detail::lvl_tag({l0, l1});
    guarded("smoothing " + tag, [&] {
      TauElement tau = variant("bracket-base-ri")
                           ? wh_pair_base_ri(d, l0, l1, N, W)
                           : wh_pair(d, l0, l1, N, W);
      if (variant("corrupt-tau")) {
        std::mt19937 rng(c.seed);
        int ch = (int)(rng() % 9u);
        int i = (int)(rng() % (unsigned)d.n), j = (int)(rng() % (unsigned)d.n);
        corrupt_component(tau, ch, i, j, Rat(1 + (long)(rng() % 5u)));
      }
      Tech1Report rep = check_tech1(d, l0, l1, tau, N, W, MINZ);
      push(out, name, "smoothing " + tag, rep.pass, rep.failures, N, MINZ);
    });
    guarded("reflection " + tag, [&] {
      TauElement x = wh_pair(d, l0, l1, N, W);
      if (variant("corrupt-tau")) {
        std::mt19937 rng(c.seed);
        int ch = (int)(rng() % 9u);
        int i = (int)(rng() % (unsigned)d.n), j = (int)(rng() % (unsigned)d.n);
        corrupt_component(x, ch, i, j, Rat(1 + (long)(rng() % 5u)));
      }
      Tech1Report rep =
          check_reflection(x, wh_pair(d, l1, l0, N, W), MINZ);
      push(out, name, "reflection " + tag, rep.pass, rep.failures, N, MINZ);
    });
  } else if (name == "unitarity") {
    std::string id = "pairs " + runner_detail::lvl_tag({l0, l1});
    guarded(id, [&] {
      GenReport rep = check_unitarity(d, l0, l1, N, W, MINZ);
      push(out, name, id, rep.pass, rep.failures, N, MINZ);
    });
  } else if (name == "qyb") {
    std::string id = "triples " + runner_detail::lvl_tag({l0, l1, l2});
    guarded(id, [&] {
      GenReport rep = check_qyb(d, l0, l1, l2, N, std::max(W, 24),
                                c.trunc.bivar_cap, 2);
      push(out, name, id, rep.pass, rep.failures, N, c.trunc.bivar_cap);
    });
  } else if (name == "intertwine") {
    for (int side = 0; side < 2; ++side) {
      std::string id = (side == 0 ? "left " : "right ") +
                       runner_detail::lvl_tag({l0, l1, l2});
      guarded(id, [&] {
        GenReport rep = check_intertwine(d, side, l0, l1, l2, N, W, MINZ);
        push(out, name, id, rep.pass, rep.failures, N, MINZ);
      });
    }
  } else if (name == "s-delta") {
    std::string id = "closed-forms " + runner_detail::lvl_tag({l0, l1});
    guarded(id, [&] {
      GenReport rep = check_s_on_coproduct(d, l0, l1, N, W, MINZ);
      push(out, name, id, rep.pass, rep.failures, N, MINZ);
    });
  } else if (name == "serre") {
    const int CAP = 24;
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < d.n; ++j) {
        if (i == j || d.a(i, j) == 0) continue;
        std::string id =
            "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
        guarded(id, [&] {
          std::vector<std::string> fails;
          for (long k = 0; k <= 6; ++k)
            for (long t = 0; t <= k; ++t) {
              unsigned long J =
                  ((1ul << (k + 1)) - 1) ^ ((1ul << t) - 1);  // suffix set
              QSeries oracle = serre_oracle(d, i, j, k, J, CAP);
              if (t % 2) oracle = -oracle;
              if (!qs_eq(serre_coeff(d, i, j, k, t, CAP), oracle))
                fails.push_back("k=" + std::to_string(k) +
                                " t=" + std::to_string(t));
            }
          long m = d.m_serre(i, j);
          for (long t = 1; t <= m; ++t)
            if (!serre_coeff(d, i, j, m, t, CAP).is_zero())
              fails.push_back("nonvanishing at the Serre exponent t=" +
                              std::to_string(t));
          push(out, name, id, fails.empty(), fails, 8, 0);
        });
      }
  } else if (name == "integrability") {
    const int CAP = 24;
    for (int i = 0; i < d.n; ++i) {
      std::string id = "node " + std::to_string(i);
      guarded(id, [&] {
        std::vector<std::string> fails;
        for (long k = 0; k <= 6; ++k)
          for (long t = 0; t <= k; ++t)
            if (!qs_eq(int_coeff(d, i, k, t, CAP), int_oracle(d, i, k, t, CAP)))
              fails.push_back("k=" + std::to_string(k) +
                              " t=" + std::to_string(t));
        push(out, name, id, fails.empty(), fails, 8, 0);
      });
    }
  } else if (name == "fock-com") {
    std::string id = "level " + rat_str(l0) + " cutoff " +
                     std::to_string(c.trunc.mode_cutoff);
    guarded(id, [&] {
      FockReport rep = check_com_suite(d, l0, c.trunc.mode_cutoff,
                                       c.trunc.degree_cutoff, N, W, 6, MINZ);
      push(out, name, id, rep.pass, rep.failures, N, c.trunc.mode_cutoff - 1);
    });
  } else if (name == "fock-YE") {
    std::string id = "level " + rat_str(l0);
    guarded(id, [&] {
      FockReport rep = check_YE(d, l0, 0, c.trunc.mode_cutoff + 1,
                                std::min(c.trunc.degree_cutoff, 3), N, W, MINZ);
      push(out, name, id, rep.pass, rep.failures, N, MINZ);
    });
  } else if (name == "fock-e-coproduct") {
    std::string id = "levels " + runner_detail::lvl_tag({l0, l1});
    guarded(id, [&] {
      FockReport rep = check_e_coproduct(d, l0, l1, N, W);
      push(out, name, id, rep.pass, rep.failures, N, 0);
    });
  } else if (name == "classical-limit") {
    std::string id = "levels " + runner_detail::lvl_tag({l0, l1});
    guarded(id, [&] {
      GenReport rep = check_classical(d, l0, l1, N, W, MINZ);
      push(out, name, id, rep.pass, rep.failures, 0, MINZ);
    });
  } else {
    throw std::invalid_argument("unknown suite: " + name);
  }
  return out;
}

inline Report run_suite(const RunConfig& c) {
  Report rep;
  std::vector<std::string> names =
      c.suites.empty() ? suite_registry() : c.suites;
  int workers = 1;
  if (const char* env = std::getenv("QVA_WORKERS")) workers = std::atoi(env);
  std::vector<runner_detail::SuiteOutcome> outs(names.size());
  std::vector<long> walls(names.size(), 0);
  auto run_at = [&](size_t k) {
    auto t0 = std::chrono::steady_clock::now();
    outs[k] = run_one_suite(names[k], c);
    walls[k] = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  };
  if (workers > 1) {
    size_t next = 0;
    std::vector<std::future<void>> pool;
    while (next < names.size() || !pool.empty()) {
      while ((int)pool.size() < workers && next < names.size())
        pool.push_back(std::async(std::launch::async, run_at, next++));
      pool.front().get();
      pool.erase(pool.begin());
    }
  } else {
    for (size_t k = 0; k < names.size(); ++k) run_at(k);
  }
  // report assembly stays ordered by the configured suite list
  for (size_t k = 0; k < names.size(); ++k) {
    long per = outs[k].entries.empty()
                   ? 0
                   : walls[k] / (long)outs[k].entries.size();
    for (auto& e : outs[k].entries) {
      e.wall_ms = c.timings ? per : 0;
      if (e.status == "pass") ++rep.passed;
      else if (e.status == "fail") ++rep.failed;
      else ++rep.skipped;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// -----------------------------------------------------------------------------
// JSON serialization.  Reports are byte-identical across runs for a fixed
// config (timings default to 0 unless explicitly requested).
// -----------------------------------------------------------------------------
inline nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["cartan"] = c.datum_name;
  if (c.datum_name == "custom") {
    j["matrix"] = c.datum.A;
    j["r"] = c.datum.r;
  }
  nlohmann::ordered_json lv = nlohmann::ordered_json::array();
  for (auto& l : c.levels) lv.push_back(rat_str(l));
  j["levels"] = lv;
  j["truncation"] = {{"hbar_order", c.trunc.hbar_order},
                     {"z_window", c.trunc.z_window},
                     {"bivar_cap", c.trunc.bivar_cap},
                     {"mode_cutoff", c.trunc.mode_cutoff},
                     {"degree_cutoff", c.trunc.degree_cutoff}};
  j["suites"] = c.suites.empty() ? suite_registry() : c.suites;
  nlohmann::ordered_json vr = nlohmann::ordered_json::object();
  for (auto& [k, v] : c.variants) vr[k] = v;
  j["variants"] = vr;
  j["seed"] = c.seed;
  return j;
}

inline nlohmann::ordered_json report_json(const Report& r, const RunConfig& c) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["config"] = config_json(c);
  nlohmann::ordered_json es = nlohmann::ordered_json::array();
  for (auto& e : r.entries) {
    nlohmann::ordered_json je;
    je["suite"] = e.suite;
    je["case"] = e.id;
    je["status"] = e.status;
    if (!e.reason.empty()) je["reason"] = e.reason;
    je["certified_hbar_order"] = e.hbar_order;
    je["certified_z_window"] = e.z_window;
    je["wall_ms"] = e.wall_ms;
    es.push_back(je);
  }
  j["entries"] = es;
  j["summary"] = {{"pass", r.passed},
                  {"fail", r.failed},
                  {"skipped", r.skipped},
                  {"total", r.passed + r.failed + r.skipped}};
  return j;
}

// -----------------------------------------------------------------------------
// Tabulators: CSV plus an aligned text rendering of the same rows.
// -----------------------------------------------------------------------------
namespace runner_detail {

inline void write_table(const std::vector<std::vector<std::string>>& rows,
                        std::ostream& csv, std::ostream& txt) {
  for (auto& r : rows) {
    for (size_t k = 0; k < r.size(); ++k) {
      if (k) csv << ",";
      csv << r[k];
    }
    csv << "\n";
  }
  std::vector<size_t> w;
  for (auto& r : rows)
    for (size_t k = 0; k < r.size(); ++k) {
      if (w.size() <= k) w.resize(k + 1, 0);
      w[k] = std::max(w[k], r[k].size());
    }
  for (auto& r : rows) {
    for (size_t k = 0; k < r.size(); ++k) {
      txt << r[k];
      if (k + 1 < r.size())
        txt << std::string(w[k] - r[k].size() + 2, ' ');
    }
    txt << "\n";
  }
}

inline void hseries_rows(const HSeries& s, const std::string& label, int zlo,
                         int zhi, std::vector<std::vector<std::string>>& rows) {
  for (int k = 0; k <= s.N; ++k)
    for (int e = zlo; e <= std::min(zhi, s.hi[k]); ++e) {
      Rat v = s.at(k, e);
      if (v == 0) continue;
      rows.push_back({label, std::to_string(k), std::to_string(e), rat_str(v)});
    }
}

}  // namespace runner_detail

// All nonzero certified coefficients of the level element's channels within a
// z-exponent window, one row per (channel, i, j, hbar order, z exponent).
inline std::vector<std::vector<std::string>> tabulate_tau(
    const CartanDatum& d, const Rat& ell, int N, int W, int zlo, int zhi) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"channel", "i", "j", "hbar_order", "z_exp", "value"});
  TauElement x = wh_ell(d, ell, N, W);
  std::vector<std::vector<std::string>> tmp;
  auto emit = [&](const HSeries& s, const std::string& ch, int i, int j) {
    tmp.clear();
    runner_detail::hseries_rows(s, ch, zlo, zhi, tmp);
    for (auto& r : tmp)
      rows.push_back({r[0], std::to_string(i), std::to_string(j), r[1], r[2],
                      r[3]});
  };
  static const char* sg[2] = {"+", "-"};
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      int ij = x.idx(i, j);
      emit(x.t[ij], "hh", i, j);
      for (int s = 0; s < 2; ++s) {
        emit(x.t1[s][ij], std::string("hx") + sg[s], i, j);
        emit(x.t2[s][ij], std::string("xh") + sg[s], i, j);
        for (int s2 = 0; s2 < 2; ++s2)
          emit(x.e[s][s2][ij], std::string("x") + sg[s] + "x" + sg[s2], i, j);
      }
    }
  return rows;
}

inline std::vector<std::vector<std::string>> tabulate_serre(
    const CartanDatum& d, int i, int j, long kmax, int cap) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"k", "t", "hbar_order", "value"});
  for (long k = 0; k <= kmax; ++k)
    for (long t = 0; t <= k; ++t) {
      QSeries c = serre_coeff(d, i, j, k, t, cap);
      for (int h = 0; h <= c.cap; ++h)
        if (c.at(h) != 0)
          rows.push_back({std::to_string(k), std::to_string(t),
                          std::to_string(h), rat_str(c.at(h))});
    }
  return rows;
}

inline std::vector<std::vector<std::string>> tabulate_integrability(
    const CartanDatum& d, int i, long kmax, int cap) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"k", "t", "hbar_order", "value"});
  for (long k = 0; k <= kmax; ++k)
    for (long t = 0; t <= k; ++t) {
      QSeries c = int_coeff(d, i, k, t, cap);
      for (int h = 0; h <= c.cap; ++h)
        if (c.at(h) != 0)
          rows.push_back({std::to_string(k), std::to_string(t),
                          std::to_string(h), rat_str(c.at(h))});
    }
  return rows;
}

inline std::vector<std::vector<std::string>> tabulate_brackets(
    const CartanDatum& d, const Rat& ell, int m_cap, int N) {
  ModeAlgebra ma = derive_brackets(d, ell, m_cap, N);
  std::ostringstream os;
  brackets_csv(ma, os);
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(os.str());
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(cell);
    if (!r.empty()) rows.push_back(r);
  }
  return rows;
}

// Named base kernels for quick inspection from the command line.
inline std::vector<std::vector<std::string>> print_series_rows(
    const std::string& spec, int N, int W, int zlo, int zhi) {
  HSeries s(N);
  if (spec == "f") s = hs_f(N, W);
  else if (spec == "f0") s = hs_f0(N, W);
  else if (spec == "logf") s = hs_log_f(N, W);
  else if (spec == "dlogf") s = hs_dlog_f(N, W);
  else if (spec == "d2logf") s = hs_d2log_f(N, W);
  else throw std::invalid_argument("unknown series spec: " + spec);
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"series", "hbar_order", "z_exp", "value"});
  runner_detail::hseries_rows(s, spec, zlo, zhi, rows);
  return rows;
}

}  // namespace qva
