#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qva/runner.hpp"

using namespace qva;

namespace {

int write_tables(const std::vector<std::vector<std::string>>& rows,
                 const std::string& out) {
  if (out.empty()) {
    std::ostringstream csv, txt;
    runner_detail::write_table(rows, csv, txt);
    std::cout << txt.str();
    return 0;
  }
  std::ofstream csv(out + ".csv"), txt(out + ".txt");
  if (!csv || !txt) {
    std::cerr << "cannot open output files for " << out << "\n";
    return 2;
  }
  runner_detail::write_table(rows, csv, txt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification suites and tabulators for the braided tensor "
               "calculus library"};
  app.require_subcommand(1);

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string cfg_path, v_output;
  std::vector<std::string> v_suites;
  bool v_timings = false;
  verify->add_option("--config", cfg_path, "JSON config file");
  verify->add_option("--suite", v_suites, "restrict to these suites");
  verify->add_option("--output", v_output, "report path (default stdout)");
  verify->add_flag("--timings", v_timings, "record wall times in the report");

  // ---- tabulate ----
  auto* tab = app.add_subcommand("tabulate", "emit coefficient tables");
  std::string t_kind, t_cartan = "A1", t_level = "1", t_out;
  int t_i = 0, t_j = 1, t_hbar = 6, t_window = 14, t_zlo = -4, t_zhi = 6;
  long t_kmax = 6, t_mcap = 6;
  tab->add_option("kind", t_kind, "tau | serre | integrability | brackets")
      ->required();
  tab->add_option("--cartan", t_cartan, "datum name (A1, A2, B2)");
  tab->add_option("--level", t_level, "level (rational, e.g. 3/2)");
  tab->add_option("-i", t_i, "first node index");
  tab->add_option("-j", t_j, "second node index");
  tab->add_option("--kmax", t_kmax, "largest power k");
  tab->add_option("--mcap", t_mcap, "largest mode for bracket tables");
  tab->add_option("--hbar-order", t_hbar, "hbar truncation");
  tab->add_option("--window", t_window, "base z-window");
  tab->add_option("--zlo", t_zlo, "lowest printed z exponent");
  tab->add_option("--zhi", t_zhi, "highest printed z exponent");
  tab->add_option("--out", t_out, "output prefix (writes .csv and .txt)");

  // ---- print-series ----
  auto* ps = app.add_subcommand("print-series", "print a base kernel");
  std::string p_spec;
  int p_hbar = 6, p_window = 12, p_zlo = -2, p_zhi = 8;
  ps->add_option("spec", p_spec, "f | f0 | logf | dlogf | d2logf")->required();
  ps->add_option("--hbar-order", p_hbar, "hbar truncation");
  ps->add_option("--window", p_window, "base z-window");
  ps->add_option("--zlo", p_zlo, "lowest printed z exponent");
  ps->add_option("--zhi", p_zhi, "highest printed z exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) {
      RunConfig cfg;
      if (!cfg_path.empty()) {
        std::ifstream in(cfg_path);
        if (!in) {
          std::cerr << "cannot read config: " << cfg_path << "\n";
          return 2;
        }
        cfg = parse_config(nlohmann::json::parse(in));
      } else {
        cfg = parse_config(nlohmann::json::object());
      }
      if (!v_suites.empty()) {
        const auto& reg = suite_registry();
        for (auto& s : v_suites)
          if (std::find(reg.begin(), reg.end(), s) == reg.end()) {
            std::cerr << "unknown suite: " << s << "\n";
            return 2;
          }
        cfg.suites = v_suites;
      }
      if (v_timings) cfg.timings = true;
      if (!v_output.empty()) cfg.output = v_output;

      Report rep = run_suite(cfg);
      std::string body = report_json(rep, cfg).dump(2) + "\n";
      if (cfg.output.empty()) {
        std::cout << body;
      } else {
        std::ofstream out(cfg.output);
        if (!out) {
          std::cerr << "cannot write report: " << cfg.output << "\n";
          return 2;
        }
        out << body;
      }
      std::cerr << "pass " << rep.passed << ", fail " << rep.failed
                << ", skipped " << rep.skipped << "\n";
      return rep.all_pass() ? 0 : 1;
    }

    if (*tab) {
      CartanDatum d = cartan_by_name(t_cartan);
      Rat lv = rat_parse(t_level);
      std::vector<std::vector<std::string>> rows;
      if (t_kind == "tau")
        rows = tabulate_tau(d, lv, t_hbar, t_window, t_zlo, t_zhi);
      else if (t_kind == "serre")
        rows = tabulate_serre(d, t_i, t_j, t_kmax, 24);
      else if (t_kind == "integrability")
        rows = tabulate_integrability(d, t_i, t_kmax, 24);
      else if (t_kind == "brackets")
        rows = tabulate_brackets(d, lv, (int)t_mcap, t_hbar);
      else {
        std::cerr << "unknown table kind: " << t_kind << "\n";
        return 2;
      }
      return write_tables(rows, t_out);
    }

    if (*ps) {
      auto rows = print_series_rows(p_spec, p_hbar, p_window, p_zlo, p_zhi);
      return write_tables(rows, "");
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
