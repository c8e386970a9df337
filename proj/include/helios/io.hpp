#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "helios/diagnostics.hpp"

namespace helios {

/// %.17g, the single number format of every file the artifact writes.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // columns[c][row]

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Column by header name; throws InputError if absent.
  const std::vector<double>& column(std::string_view name) const;
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);
CsvTable read_csv(const std::filesystem::path& path);

/// Curve CSV: `alpha,eta,h` with one row per node.
void write_curve_csv(const std::filesystem::path& path, const PeriodicGrid& grid,
                     std::span<const double> eta);
/// Reads a curve CSV; the alpha column must be the uniform grid 2πj/N.
Samples read_curve_csv(const std::filesystem::path& path);

/// Boundary-data CSV: `alpha,g`, on the same nodes as the curve.
Samples read_boundary_data_csv(const std::filesystem::path& path, const PeriodicGrid& grid);
void write_boundary_data_csv(const std::filesystem::path& path, const PeriodicGrid& grid,
                             std::span<const double> g);

/// Run directory: run.json (config echo and summary), trace.csv with one row
/// per step, snapshots/t_<index>.csv.
void write_run_directory(const std::filesystem::path& dir, const EvolutionRun& run);
EvolutionRun read_run_directory(const std::filesystem::path& dir);

std::string snapshot_file_name(std::size_t index);

/// JSON rendering of an invariant report (stable key order and formatting).
std::string report_json(const InvariantReport& report);

void write_pressure_csv(const std::filesystem::path& path, const PressureField& field);

enum class PlotKind { run, pressure, sweep, dtn };

/// Writes a gnuplot script next to the CSVs it plots.
void write_gnuplot_script(const std::filesystem::path& path, PlotKind kind);

}  // namespace helios
