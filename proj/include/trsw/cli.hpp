#pragma once
/// \file cli.hpp
/// \brief Command-line front end: configuration parsing and batch runs.
///
/// Configuration sources, highest precedence first: command-line flags,
/// a `key = value` config file (--config), scenario defaults.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trsw/io.hpp"

namespace trsw::cli {

struct RunConfig {
  std::string scenario;
  std::optional<long long> cells;
  std::optional<double> t_final;
  std::optional<std::vector<double>> snapshots;
  std::string out = ".";
  std::optional<double> cfl;
  std::optional<double> sigma;
  bool diagnostics = false;
  std::optional<std::string> compare_with;
  std::vector<long long> convergence;

  ScenarioOverrides overrides() const {
    ScenarioOverrides ov;
    ov.cells = cells;
    ov.t_final = t_final;
    ov.snapshots = snapshots;
    ov.sigma = sigma;
    ov.cfl = cfl;
    return ov;
  }
};

inline std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  const auto last = s.find_last_not_of(" \t\r");
  s.erase(last == std::string::npos ? 0 : last + 1);
  return s;
}

inline double to_real(const std::string &text, const std::string &key) {
  try {
    return parse_real(trim(text), key);
  } catch (const IoError &) {
    throw ConfigError("malformed number for " + key + ": '" + text + "'");
  }
}

inline long long to_integer(const std::string &text, const std::string &key) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception &) {
    throw ConfigError("malformed integer for " + key + ": '" + text + "'");
  }
  if (used != t.size()) throw ConfigError("malformed integer for " + key + ": '" + text + "'");
  return v;
}

template <class T, class Convert>
std::vector<T> split_list(const std::string &text, const std::string &key, Convert conv) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(conv(item, key));
  }
  return out;
}

inline bool to_flag(const std::string &text, const std::string &key) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("malformed boolean for " + key + ": '" + text + "'");
}

/// Applies one `key = value` entry. Unknown keys are rejected.
inline void apply_entry(RunConfig &cfg, const std::string &key, const std::string &value) {
  if (key == "scenario") cfg.scenario = trim(value);
  else if (key == "cells") cfg.cells = to_integer(value, key);
  else if (key == "t_final") cfg.t_final = to_real(value, key);
  else if (key == "snapshots") cfg.snapshots = split_list<double>(value, key, to_real);
  else if (key == "out") cfg.out = trim(value);
  else if (key == "cfl") cfg.cfl = to_real(value, key);
  else if (key == "sigma") cfg.sigma = to_real(value, key);
  else if (key == "diagnostics") cfg.diagnostics = to_flag(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Parses flat `key = value` lines; `#` starts a comment.
inline RunConfig parse_config_text(const std::string &text, RunConfig cfg = {}) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_entry(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string &path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(cfg));
}

/// Parses command-line arguments (args[0] is the program name). Throws
/// ConfigError on invalid input; CLI11 help/version requests propagate as
/// CLI::Success.
inline RunConfig parse_config(const std::vector<std::string> &args) {
  CLI::App app{"Well-balanced central-upwind solver for 1-D thermal rotating shallow water"};
  std::string config_path, scenario, out, snapshots, compare, convergence;
  std::optional<long long> cells;
  std::optional<double> t_final, cfl, sigma;
  bool diagnostics = false;

  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--scenario", scenario, "scenario id");
  app.add_option("--cells", cells, "number of cells");
  app.add_option("--t-final", t_final, "final time");
  app.add_option("--snapshots", snapshots, "comma-separated output times");
  app.add_option("--out", out, "output directory");
  app.add_option("--cfl", cfl, "CFL number");
  app.add_option("--sigma", sigma, "generalized minmod parameter");
  app.add_flag("--diagnostics", diagnostics, "write the diagnostics time series");
  app.add_option("--compare-with", compare, "snapshot to compare the final state against");
  app.add_option("--convergence", convergence, "comma-separated nested cell counts");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::Success &) {
    throw;
  } catch (const CLI::ParseError &e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  auto given = [&](const char *name) { return app.count(name) > 0; };
  if (given("--scenario")) cfg.scenario = scenario;
  if (cells) cfg.cells = cells;
  if (t_final) cfg.t_final = t_final;
  if (given("--snapshots")) cfg.snapshots = split_list<double>(snapshots, "snapshots", to_real);
  if (given("--out")) cfg.out = out;
  if (cfl) cfg.cfl = cfl;
  if (sigma) cfg.sigma = sigma;
  if (diagnostics) cfg.diagnostics = true;
  if (given("--compare-with")) cfg.compare_with = compare;
  if (given("--convergence")) cfg.convergence = split_list<long long>(convergence, "convergence", to_integer);

  if (cfg.scenario.empty()) throw ConfigError("no scenario given (--scenario)");
  parse_scenario_id(cfg.scenario);
  return cfg;
}

inline std::string snapshot_path(const RunConfig &cfg, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03zu.csv", index);
  return (std::filesystem::path(cfg.out) / (cfg.scenario + buf)).string();
}

inline void print_comparison(std::ostream &os, const ComparisonTable &table) {
  os << "column,L1,Linf\n";
  for (const auto &[name, e] : table) os << name << ',' << format_real(e.l1) << ',' << format_real(e.linf) << '\n';
}

/// Executes a parsed configuration. Returns the process exit code: 0 iff the
/// run completed and every output was written.
inline int run(const RunConfig &cfg, std::ostream &os, std::ostream &err) {
  try {
    std::filesystem::create_directories(cfg.out);
    const ScenarioId id = parse_scenario_id(cfg.scenario);

    if (!cfg.convergence.empty()) {
      const ConvergenceTable table = convergence_study(id, cfg.overrides(), cfg.convergence);
      const std::string path = (std::filesystem::path(cfg.out) / (cfg.scenario + "_convergence.csv")).string();
      std::ofstream out(path);
      if (!out) throw IoError("cannot open '" + path + "' for writing");
      out << "coarse_cells,fine_cells,l1_" << table.field << ",order\n";
      os << "N_coarse  N_fine  L1(" << table.field << ")  order\n";
      for (const auto &row : table.rows) {
        const std::string order = table.exact ? "exact" : (row.order ? format_real(*row.order) : "-");
        out << row.coarse_cells << ',' << row.fine_cells << ',' << format_real(row.l1) << ',' << order << '\n';
        os << row.coarse_cells << "  " << row.fine_cells << "  " << format_real(row.l1) << "  " << order << '\n';
      }
      if (!out) throw IoError("write failed for '" + path + "'");
      return 0;
    }

    const Scenario sc = make_scenario(id, cfg.overrides());
    ConservationLedger ledger(sc);
    std::vector<DiagnosticsRecord> records;
    std::size_t snap_index = 0;
    std::string last_snapshot;
    const SimulationResult res = run_simulation(sc, [&](const StepEvent &ev) {
      if (cfg.diagnostics) records.push_back(ledger.record(ev));
      if (ev.is_snapshot) {
        last_snapshot = snapshot_path(cfg, snap_index++);
        write_snapshot(*ev.state, sc.topography, sc.grid, {sc.name, ev.t, sc.numerics}, last_snapshot);
      }
    });
    if (cfg.diagnostics)
      write_diagnostics(records, (std::filesystem::path(cfg.out) / (cfg.scenario + "_diagnostics.csv")).string());

    os << "scenario " << sc.name << ": N=" << sc.grid.size() << " steps=" << res.steps
       << " t=" << format_real(res.t) << " snapshots=" << snap_index << '\n';
    if (res.failed) {
      err << "integration failed: " << res.error << " (outputs up to the failure were written)\n";
      return 1;
    }
    if (cfg.compare_with) {
      print_comparison(os, compare_solutions(last_snapshot, *cfg.compare_with));
    }
    return 0;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const CLI::Success &) {
    std::cout << "usage: trsw --scenario <id> [--cells N] [--t-final T] [--snapshots t1,t2,...]\n"
                 "            [--out DIR] [--cfl C] [--sigma S] [--diagnostics]\n"
                 "            [--compare-with FILE] [--convergence N1,N2,...] [--config FILE]\n"
                 "scenarios:";
    for (const auto &s : kScenarioNames) std::cout << ' ' << s.name;
    std::cout << '\n';
    return 0;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace trsw::cli
