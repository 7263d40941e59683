#pragma once
/// \file io.hpp
/// \brief Snapshot and diagnostics CSV files, solution comparison and
/// grid-refinement studies.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trsw/diagnostics.hpp"
#include "trsw/scenarios.hpp"

namespace trsw {

/// Raised on unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> &snapshot_columns() {
  static const std::vector<std::string> cols{"y", "h", "q", "p", "hb", "u", "v", "b", "w", "Z"};
  return cols;
}

/// Fixed 17-significant-digit scientific notation.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

struct SnapshotMeta {
  std::string scenario;
  double t = 0.0;
  Numerics numerics;
};

inline void write_snapshot(const ConservedState &s, const Topography &topo, const Grid &grid,
                           const SnapshotMeta &meta, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const Primitives prim = primitives_from_state(s, topo, meta.numerics.eps_desing);
  out << "# scenario: " << meta.scenario << '\n'
      << "# N: " << grid.size() << '\n'
      << "# t: " << format_real(meta.t) << '\n'
      << "# y_min: " << format_real(grid.y_min()) << '\n'
      << "# y_max: " << format_real(grid.y_max()) << '\n'
      << "# cfl: " << format_real(meta.numerics.cfl) << '\n'
      << "# sigma: " << format_real(meta.numerics.sigma) << '\n'
      << "# eps: " << format_real(meta.numerics.eps_desing) << '\n'
      << "# switch_C: " << format_real(meta.numerics.switch_c) << '\n'
      << "# switch_m: " << meta.numerics.switch_m << '\n';
  const auto &cols = snapshot_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double row[] = {grid.center(k), s.h[k],      s.q[k],      s.p[k],    s.hb[k],
                          prim.u[k],      prim.v[k],   prim.b[k],   prim.w[k], topo.center()[k]};
    for (std::size_t c = 0; c < std::size(row); ++c) out << (c ? "," : "") << format_real(row[c]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Parsed snapshot file: `# key: value` metadata and named columns.
struct SnapshotData {
  std::map<std::string, std::string> meta;
  std::map<std::string, Field> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.begin()->second.size(); }
  const Field &column(const std::string &name) const {
    auto it = columns.find(name);
    if (it == columns.end()) throw IoError("snapshot has no column '" + name + "'");
    return it->second;
  }
};

inline double parse_real(const std::string &text, const std::string &context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    throw IoError("malformed number '" + text + "' in " + context);
  }
  if (used != text.size()) throw IoError("malformed number '" + text + "' in " + context);
  return v;
}

inline SnapshotData read_snapshot(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  SnapshotData data;
  std::vector<std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string val = line.substr(colon + 1);
        auto trim = [](std::string &s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(val);
        data.meta[key] = val;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    if (header.empty()) {
      header = cells;
      for (const auto &h : header) data.columns[h];
      continue;
    }
    if (cells.size() != header.size()) throw IoError("ragged row in '" + path + "'");
    for (std::size_t c = 0; c < cells.size(); ++c)
      data.columns[header[c]].push_back(parse_real(cells[c], path));
  }
  if (header.empty()) throw IoError("'" + path + "' has no header row");
  return data;
}

/// Per-column discrete L1 (sum |a - b| dy) and max-norm differences.
struct ColumnError {
  double l1 = 0.0;
  double linf = 0.0;
};

using ComparisonTable = std::map<std::string, ColumnError>;

/// Averages groups of `factor` consecutive cells.
inline Field restrict_average(const Field &fine, std::size_t factor) {
  Field coarse(fine.size() / factor, 0.0);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < factor; ++j) sum += fine[k * factor + j];
    coarse[k] = sum / static_cast<double>(factor);
  }
  return coarse;
}

/// Compares two snapshots on the coarser grid; the finer one must refine the
/// coarser one by an integer factor over the same domain.
inline ComparisonTable compare_solutions(const SnapshotData &a, const SnapshotData &b) {
  const SnapshotData &coarse = a.rows() <= b.rows() ? a : b;
  const SnapshotData &fine = a.rows() <= b.rows() ? b : a;
  const std::size_t nc = coarse.rows();
  const std::size_t nf = fine.rows();
  if (nc < 2 || nf % nc != 0) throw IoError("incompatible grids: " + std::to_string(nc) + " vs " + std::to_string(nf) + " cells");
  const std::size_t factor = nf / nc;

  const Field &yc = coarse.column("y");
  const Field yf = restrict_average(fine.column("y"), factor);
  const double dy = (yc.back() - yc.front()) / static_cast<double>(nc - 1);
  for (std::size_t k = 0; k < nc; ++k)
    if (std::abs(yc[k] - yf[k]) > 1e-9 * std::max(1.0, std::abs(yc[k])) + 1e-6 * dy)
      throw IoError("incompatible grids: cell centers do not nest");

  ComparisonTable table;
  for (const auto &[name, col] : coarse.columns) {
    if (name == "y" || !fine.columns.count(name)) continue;
    const Field other = restrict_average(fine.columns.at(name), factor);
    ColumnError e;
    for (std::size_t k = 0; k < nc; ++k) {
      const double d = std::abs(col[k] - other[k]);
      e.l1 += d * dy;
      e.linf = std::max(e.linf, d);
    }
    table[name] = e;
  }
  return table;
}

inline ComparisonTable compare_solutions(const std::string &path_a, const std::string &path_b) {
  return compare_solutions(read_snapshot(path_a), read_snapshot(path_b));
}

/// In-memory snapshot in the same layout as the CSV file.
inline SnapshotData to_snapshot_data(const ConservedState &s, const Topography &topo,
                                     const Grid &grid, double eps) {
  const Primitives prim = primitives_from_state(s, topo, eps);
  SnapshotData d;
  d.columns["y"] = grid.centers();
  d.columns["h"] = s.h;
  d.columns["q"] = s.q;
  d.columns["p"] = s.p;
  d.columns["hb"] = s.hb;
  d.columns["u"] = prim.u;
  d.columns["v"] = prim.v;
  d.columns["b"] = prim.b;
  d.columns["w"] = prim.w;
  d.columns["Z"] = topo.center();
  return d;
}

inline constexpr const char *kDiagnosticsHeader =
    "t,mass,hb_total,mass_drift,hb_drift,energy,max_abs_v,max_grad_v,tv_w";

inline void write_diagnostics(const std::vector<DiagnosticsRecord> &records, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kDiagnosticsHeader << '\n';
  for (const auto &r : records) {
    out << format_real(r.t) << ',' << format_real(r.total_mass) << ',' << format_real(r.total_hb)
        << ',' << format_real(r.mass_drift) << ',' << format_real(r.hb_drift) << ','
        << (std::isnan(r.energy) ? std::string("nan") : format_real(r.energy)) << ','
        << format_real(r.max_abs_v) << ',' << format_real(r.max_grad_v) << ','
        << format_real(r.tv_w) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Successive-refinement study of one field.
struct ConvergenceRow {
  long long coarse_cells = 0;
  long long fine_cells = 0;
  double l1 = 0.0;
  std::optional<double> order;  ///< empty for the first row or exact runs
};

struct ConvergenceTable {
  std::string field;
  std::vector<ConvergenceRow> rows;
  bool exact = false;  ///< all differences at round-off level
};

inline void validate_refinement(const std::vector<long long> &cells) {
  if (cells.size() < 2) throw ConfigError("convergence: need at least two resolutions");
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    if (cells[i] <= 0 || cells[i + 1] <= cells[i])
      throw ConfigError("convergence: cell counts must be positive and strictly increasing");
    if (cells[i + 1] % cells[i] != 0)
      throw ConfigError("convergence: cell counts must be nested integer refinements");
  }
}

/// Runs `id` at each resolution and reports L1 differences of `field`
/// between successive runs with observed orders
/// log(e_i / e_{i+1}) / log(N_{i+1} / N_i).
inline ConvergenceTable convergence_study(ScenarioId id, ScenarioOverrides base,
                                          const std::vector<long long> &cells,
                                          const std::string &field = "h") {
  validate_refinement(cells);
  std::vector<SnapshotData> runs;
  for (long long n : cells) {
    base.cells = n;
    const Scenario sc = make_scenario(id, base);
    const SimulationResult res = run_simulation(sc);
    if (res.failed) throw IntegrationError("convergence run N=" + std::to_string(n) + " failed: " + res.error, res.t);
    runs.push_back(to_snapshot_data(res.final_state, sc.topography, sc.grid, sc.numerics.eps_desing));
  }
  ConvergenceTable table;
  table.field = field;
  double scale = 0.0;
  for (double x : runs.back().column(field)) scale = std::max(scale, std::abs(x));
  const double domain = runs.front().column("y").back() - runs.front().column("y").front();
  bool exact = true;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    ConvergenceRow row;
    row.coarse_cells = cells[i];
    row.fine_cells = cells[i + 1];
    row.l1 = compare_solutions(runs[i], runs[i + 1]).at(field).l1;
    exact = exact && row.l1 <= 1e-12 * std::max(scale, 1.0) * std::max(domain, 1.0);
    table.rows.push_back(row);
  }
  table.exact = exact;
  if (!exact) {
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      const auto &prev = table.rows[i - 1];
      auto &cur = table.rows[i];
      if (prev.l1 > 0.0 && cur.l1 > 0.0)
        cur.order = std::log(prev.l1 / cur.l1) /
                    std::log(static_cast<double>(cur.fine_cells) / static_cast<double>(cur.coarse_cells));
    }
  }
  return table;
}

}  // namespace trsw
