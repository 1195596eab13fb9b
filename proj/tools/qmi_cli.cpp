#include "qmi/config.hpp"
#include "qmi/report.hpp"
#include "qmi/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace qmi;

namespace {

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw report_error("cannot open \"" + path + "\" for writing");
  out << text;
  out.flush();
  if (!out) throw report_error("write to \"" + path + "\" failed");
}

std::string combo_str(const ModeCombo& mc, const LieData& lie) {
  std::string s;
  for (const auto& [mode, v] : mc.terms)
    for (long i = 0; i < lie.dim(); ++i)
      if (v(i) != 0) {
        if (!s.empty()) s += " + ";
        if (v(i) != 1) s += v(i).str() + "*";
        s += lie.labels[i] + "(" + std::to_string(mode) + ")";
      }
  if (mc.central != 0) {
    if (!s.empty()) s += " + ";
    s += mc.central.str() + "*k";
  }
  return s.empty() ? "0" : s;
}

int do_verify(const std::string& config_path, const std::vector<std::string>& suites,
              long degree, const std::vector<long>& window, const std::string& format_name,
              const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  if (!suites.empty()) {
    const auto& known = known_suite_names();
    for (const auto& s : suites)
      if (std::find(known.begin(), known.end(), s) == known.end()) {
        std::string list;
        for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
        throw config_error(config_error::Kind::unknown_suite,
                           "unknown suite \"" + s + "\" (known suites: " + list + ")");
      }
    cfg.suites = suites;
  }
  if (degree >= 0) cfg.depth = degree;
  if (window.size() == 2) {
    if (window[0] > window[1])
      throw config_error(config_error::Kind::invalid_value,
                         "--window floor exceeds its ceiling");
    cfg.win_lo = window[0];
    cfg.win_hi = window[1];
  }
  if (!out_path.empty()) cfg.out = out_path;

  VerificationReport rep = run_suite(cfg);
  write_output(emit_report(rep, parse_format(format_name)), cfg.out);
  return all_pass(rep) ? 0 : 1;
}

int do_brackets(const std::string& config_path, const std::vector<long>& window,
                const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  long lo = -2, hi = 2;
  if (window.size() == 2) {
    lo = window[0];
    hi = window[1];
  }
  std::ostringstream out;
  const LieData& lie = cfg.lie;
  for (long ja = 0; ja < lie.dim(); ++ja)
    for (long jb = 0; jb < lie.dim(); ++jb) {
      Vec a = Vec::Zero(lie.dim()), b = Vec::Zero(lie.dim());
      a(ja) = 1;
      b(jb) = 1;
      for (long m = lo; m <= hi; ++m)
        for (long n = lo; n <= hi; ++n) {
          ModeCombo mc = mode_bracket_symbolic(a, m, b, n, lie, cfg.gamma, cfg.level);
          out << "[" << lie.labels[ja] << "(" << m << "), " << lie.labels[jb] << "(" << n
              << ")] = " << combo_str(mc, lie) << "\n";
        }
    }
  write_output(out.str(), out_path);
  return 0;
}

int do_report(const std::string& report_path, const std::string& format_name,
              const std::string& out_path) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw report_error("cannot open report file \"" + report_path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  VerificationReport rep = parse_report(buf.str());
  write_output(emit_report(rep, parse_format(format_name)), out_path);
  return all_pass(rep) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for quasi modules at infinity"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, format_name = "human";
  std::vector<std::string> suites;
  std::vector<long> window;
  long degree = -1;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites from a config");
  verify->add_option("--config", config_path, "config file (JSON)")->required();
  verify->add_option("--suite", suites, "suite to run (repeatable, overrides the config)");
  verify->add_option("--degree", degree, "pair depth for the module suites");
  verify->add_option("--window", window, "comparison window floor and ceiling")
      ->expected(2);
  verify->add_option("--format", format_name, "human or machine");
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* brackets =
      app.add_subcommand("brackets", "print symbolic mode bracket tables");
  brackets->add_option("--config", config_path, "config file (JSON)")->required();
  brackets->add_option("--window", window, "mode range for the table")->expected(2);
  brackets->add_option("--out", out_path, "write the table here instead of stdout");

  CLI::App* report = app.add_subcommand("report", "reformat a saved machine report");
  report->add_option("path", report_path, "machine report file")->required();
  report->add_option("--format", format_name, "human or machine");
  report->add_option("--out", out_path, "write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return do_verify(config_path, suites, degree, window, format_name, out_path);
    if (brackets->parsed()) return do_brackets(config_path, window, out_path);
    return do_report(report_path, format_name, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
