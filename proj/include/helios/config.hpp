#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helios/evolution.hpp"

namespace helios {

struct InitialSpec {
  std::string kind = "fourier";  // fourier | file | corner
  std::map<int, double> cos_coeffs;  // cos_0 is the constant term
  std::map<int, double> sin_coeffs;
  std::filesystem::path path;       // kind = file; relative to the config file
  double opening_angle = 0.0;       // kind = corner
  double base_radius = 0.25;
  double kink_width = 0.3;
  std::optional<double> mollify_eps;
};

struct OutputSpec {
  std::filesystem::path directory = "run";
  std::vector<std::string> formats = {"csv"};  // csv, gnuplot

  bool wants(std::string_view format) const;
};

struct RunConfig {
  EvolutionConfig evolution;
  InitialSpec initial;
  OutputSpec output;
  std::filesystem::path base_dir;  // directory of the config file
};

/// Parses the TOML-style run configuration. Every key is validated before any
/// computation; unknown sections or keys, wrong types and out-of-range values
/// throw ConfigError naming the line.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// η₀ on the configured grid, mollified when mollify_eps is set.
Samples initial_eta(const RunConfig& config);

}  // namespace helios
