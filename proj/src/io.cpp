#include "helios/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helios/errors.hpp"
#include "json.hpp"

namespace helios {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw InputError("csv: missing column '" + std::string(name) + "'");
}

std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InputShapeError("csv: header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw InputShapeError("csv: columns of unequal length");
  }
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw InputError("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& s, const fs::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

void check_grid_column(const std::vector<double>& alpha, const PeriodicGrid& grid,
                       const fs::path& path) {
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (std::abs(alpha[j] - grid.node(j)) > 1e-9) {
      throw InputError(path.string() + ": alpha column is not the uniform grid 2*pi*j/N (row " +
                       std::to_string(j + 1) + ")");
    }
  }
}

}  // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  write_text(path, csv_string(header, columns));
}

CsvTable read_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = cells;
      t.columns.resize(cells.size());
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw InputShapeError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " fields");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      t.columns[c].push_back(parse_number(cells[c], path, line_no));
    }
  }
  if (t.header.empty()) throw InputError(path.string() + ": empty csv");
  return t;
}

void write_curve_csv(const fs::path& path, const PeriodicGrid& grid, std::span<const double> eta) {
  detail::require_length(grid, eta.size(), "write_curve_csv");
  std::vector<double> h(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) h[j] = std::exp(eta[j]);
  write_csv(path, {"alpha", "eta", "h"}, {Samples(grid.nodes().begin(), grid.nodes().end()), Samples(eta.begin(), eta.end()), h});
}

Samples read_curve_csv(const fs::path& path) {
  const auto t = read_csv(path);
  const auto& alpha = t.column("alpha");
  const auto& eta = t.column("eta");
  const PeriodicGrid grid(eta.size());
  check_grid_column(alpha, grid, path);
  return eta;
}

Samples read_boundary_data_csv(const fs::path& path, const PeriodicGrid& grid) {
  const auto t = read_csv(path);
  const auto& g = t.column("g");
  detail::require_length(grid, g.size(), "boundary data");
  check_grid_column(t.column("alpha"), grid, path);
  return g;
}

void write_boundary_data_csv(const fs::path& path, const PeriodicGrid& grid,
                             std::span<const double> g) {
  detail::require_length(grid, g.size(), "write_boundary_data_csv");
  write_csv(path, {"alpha", "g"}, {Samples(grid.nodes().begin(), grid.nodes().end()), Samples(g.begin(), g.end())});
}

std::string snapshot_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t_%06zu.csv", index);
  return buf;
}

void write_run_directory(const fs::path& dir, const EvolutionRun& run) {
  fs::create_directories(dir / "snapshots");
  const auto& cfg = run.config;

  Json config;
  config["epsilon"] = cfg.epsilon;
  if (cfg.dt) config["dt"] = *cfg.dt; else config["dt"] = "auto";
  config["t_end"] = cfg.t_end;
  config["n_points"] = cfg.n_points;
  config["save_every"] = cfg.save_every;
  config["cfl_safety"] = cfg.cfl_safety;

  Json summary;
  summary["steps"] = run.diagnostics.empty() ? 0 : run.diagnostics.size() - 1;
  summary["snapshot_count"] = run.snapshots.size();
  summary["snapshot_times"] = run.times;
  if (!run.diagnostics.empty()) {
    const auto& last = run.diagnostics.back();
    double taylor = -INFINITY;
    for (const auto& d : run.diagnostics) taylor = std::max(taylor, d.taylor_max);
    summary["final_time"] = last.t;
    summary["final_min_h"] = last.stats.min_h;
    summary["final_max_h"] = last.stats.max_h;
    summary["final_lipschitz"] = last.stats.lipschitz_norm;
    summary["final_area"] = last.stats.area;
    summary["max_taylor"] = taylor;
  }
  Json doc;
  doc["config"] = config;
  doc["summary"] = summary;
  write_text(dir / "run.json", doc.dump(2) + "\n");

  std::vector<std::vector<double>> cols(6);
  for (const auto& d : run.diagnostics) {
    cols[0].push_back(d.t);
    cols[1].push_back(d.stats.min_h);
    cols[2].push_back(d.stats.max_h);
    cols[3].push_back(d.stats.lipschitz_norm);
    cols[4].push_back(d.stats.area);
    cols[5].push_back(d.taylor_max);
  }
  write_csv(dir / "trace.csv", {"t", "min_h", "max_h", "lipschitz", "area", "taylor_max"}, cols);

  if (!run.snapshots.empty()) {
    const PeriodicGrid grid(run.snapshots.front().size());
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
      write_curve_csv(dir / "snapshots" / snapshot_file_name(k), grid, run.snapshots[k]);
    }
  }
}

EvolutionRun read_run_directory(const fs::path& dir) {
  Json doc;
  try {
    doc = Json::parse(read_text(dir / "run.json"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError((dir / "run.json").string() + ": " + e.what());
  }
  EvolutionRun run;
  try {
    const auto& c = doc.at("config");
    run.config.epsilon = c.at("epsilon").get<double>();
    if (c.at("dt").is_number()) run.config.dt = c.at("dt").get<double>();
    run.config.t_end = c.at("t_end").get<double>();
    run.config.n_points = c.at("n_points").get<std::size_t>();
    run.config.save_every = c.at("save_every").get<std::size_t>();
    run.config.cfl_safety = c.at("cfl_safety").get<double>();
    run.times = doc.at("summary").at("snapshot_times").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError((dir / "run.json").string() + ": " + e.what());
  }

  for (std::size_t k = 0; k < run.times.size(); ++k) {
    run.snapshots.push_back(read_curve_csv(dir / "snapshots" / snapshot_file_name(k)));
  }

  const auto trace = read_csv(dir / "trace.csv");
  const auto& t = trace.column("t");
  const auto& lo = trace.column("min_h");
  const auto& hi = trace.column("max_h");
  const auto& lip = trace.column("lipschitz");
  const auto& area = trace.column("area");
  const auto& taylor = trace.column("taylor_max");
  for (std::size_t r = 0; r < trace.rows(); ++r) {
    run.diagnostics.push_back({t[r], {lip[r], lo[r], hi[r], area[r], std::atan(lip[r])}, taylor[r]});
  }
  return run;
}

std::string report_json(const InvariantReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j;
    j["name"] = c.name;
    j["applicable"] = c.applicable;
    j["passed"] = c.passed;
    j["tolerance"] = c.tolerance;
    if (c.applicable) j["margin"] = c.margin; else j["margin"] = nullptr;
    j["detail"] = c.detail;
    checks.push_back(j);
  }
  Json doc;
  doc["all_passed"] = report.all_passed();
  doc["checks"] = checks;
  return doc.dump(2) + "\n";
}

void write_pressure_csv(const fs::path& path, const PressureField& field) {
  write_csv(path, {"r", "theta", "phi", "p"}, {field.r, field.theta, field.phi, field.p});
}

void write_gnuplot_script(const fs::path& path, PlotKind kind) {
  std::string s = "set datafile separator ','\nset key autotitle columnhead\n";
  switch (kind) {
    case PlotKind::run:
      s += "set terminal pngcairo size 1200,500\nset output 'run.png'\nset multiplot layout 1,2\n"
           "set xlabel 't'\nplot 'trace.csv' using 1:2 with lines, '' using 1:3 with lines\n"
           "set xlabel 'alpha'\nset ylabel 'h'\n"
           "files = system('ls snapshots/*.csv')\n"
           "plot for [f in files] f using 1:3 with lines notitle\n"
           "unset multiplot\n";
      break;
    case PlotKind::pressure:
      s += "set terminal pngcairo size 700,600\nset output 'pressure.png'\nset size ratio -1\n"
           "plot 'pressure.csv' using ($1*cos($2)):($1*sin($2)):4 with points pt 7 ps 0.5 "
           "palette notitle\n";
      break;
    case PlotKind::sweep:
      s += "set terminal pngcairo size 700,500\nset output 'sweep.png'\nset logscale xy\n"
           "set xlabel 'eps'\nplot 'sweep.csv' using 1:2 with linespoints\n";
      break;
    case PlotKind::dtn:
      s += "set terminal pngcairo size 700,500\nset output 'dtn.png'\nset xlabel 'alpha'\n"
           "plot 'dtn.csv' using 1:2 with lines, '' using 1:3 with lines\n";
      break;
  }
  write_text(path, s);
}

}  // namespace helios
