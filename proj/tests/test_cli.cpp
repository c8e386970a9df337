#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helios/io.hpp"
#include "scratch_dir.hpp"

using namespace helios;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" HELIOS_CLI_PATH "' " + args +
                          " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate a radial run, then verify it") {
  const ScratchDir dir("cli_sim");
  spit(dir / "radial.toml",
       "[grid]\nn_points = 32\n[evolution]\ndt = 1e-3\nt_end = 0.5\nsave_every = 100\n"
       "[output]\ndirectory = \"out\"\n");
  REQUIRE(run_cli("simulate radial.toml --emit-gnuplot", dir.path()) == 0);
  const auto trace = read_csv(dir / "out" / "trace.csv");
  CHECK(std::abs(trace.column("max_h").back() - std::sqrt(2.0)) < 1e-6);
  CHECK(trace.column("t").back() == 0.5);
  CHECK(fs::exists(dir / "out" / "plot.gp"));
  CHECK(fs::exists(dir / "out" / "snapshots" / snapshot_file_name(5)));

  CHECK(run_cli("verify out", dir.path()) == 0);
  CHECK(slurp(dir / "out" / "report.json").find("\"all_passed\": true") != std::string::npos);
  const auto pressure = read_csv(dir / "out" / "pressure.csv");
  CHECK(pressure.header == std::vector<std::string>{"r", "theta", "phi", "p"});

  // Same config, same bytes.
  REQUIRE(run_cli("simulate radial.toml -o out2", dir.path()) == 0);
  CHECK(slurp(dir / "out" / "trace.csv") == slurp(dir / "out2" / "trace.csv"));
  CHECK(slurp(dir / "out" / "snapshots" / snapshot_file_name(3)) ==
        slurp(dir / "out2" / "snapshots" / snapshot_file_name(3)));
}

TEST_CASE("verify exits 3 on a corrupted run") {
  const ScratchDir dir("cli_corrupt");
  spit(dir / "wavy.toml",
       "[grid]\nn_points = 32\n[initial]\nsin_2 = 0.2\n[evolution]\ndt = 1e-3\nt_end = 0.05\n"
       "save_every = 10\n[output]\ndirectory = \"out\"\n");
  REQUIRE(run_cli("simulate wavy.toml", dir.path()) == 0);
  REQUIRE(run_cli("verify out", dir.path()) == 0);
  const auto snap = dir / "out" / "snapshots" / snapshot_file_name(2);
  auto eta = read_curve_csv(snap);
  eta[4] += 0.1;
  write_curve_csv(snap, PeriodicGrid(32), eta);
  CHECK(run_cli("verify out", dir.path()) == 3);
  CHECK(slurp(dir / "out" / "report.json").find("\"all_passed\": false") != std::string::npos);
}

TEST_CASE("simulate exit codes") {
  const ScratchDir dir("cli_codes");
  spit(dir / "typo.toml", "[evolution]\nt_ned = 1\n");
  CHECK(run_cli("simulate typo.toml", dir.path()) == 1);
  CHECK(slurp(dir / "cli_stderr.txt").find("t_ned") != std::string::npos);
  spit(dir / "boom.toml",
       "[grid]\nn_points = 32\n[initial]\ncos_5 = 0.5\n[evolution]\ndt = 100\nt_end = 200\n");
  CHECK(run_cli("simulate boom.toml", dir.path()) == 2);
  CHECK(run_cli("simulate missing.toml", dir.path()) != 0);
}

TEST_CASE("dtn on the circle, with and without the oracle") {
  const ScratchDir dir("cli_dtn");
  const PeriodicGrid g(64);
  write_curve_csv(dir / "circle.csv", g, Samples(64, 0.0));
  write_boundary_data_csv(dir / "cos3.csv", g, g.sample([](double a) { return std::cos(3 * a); }));
  REQUIRE(run_cli("dtn circle.csv cos3.csv -o dtn.csv --oracle", dir.path()) == 0);
  const auto t = read_csv(dir / "dtn.csv");
  CHECK(t.header == std::vector<std::string>{"alpha", "theta", "G", "G_oracle"});
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(std::abs(t.column("G")[j] - 3 * std::cos(3 * g.node(j))) < 1e-10);
    CHECK(std::abs(t.column("G_oracle")[j] - 3 * std::cos(3 * g.node(j))) < 1e-10);
  }
  REQUIRE(run_cli("dtn circle.csv cos3.csv", dir.path()) == 0);
  CHECK(slurp(dir / "cli_stdout.txt").rfind("alpha,theta,G\n", 0) == 0);
}

TEST_CASE("pressure, symmetry and sweep") {
  const ScratchDir dir("cli_misc");
  const PeriodicGrid g(64);
  write_curve_csv(dir / "wavy.csv", g, g.sample([](double a) { return 0.1 * std::cos(a); }));
  REQUIRE(run_cli("pressure wavy.csv --nr 8 --ntheta 12 -o p.csv", dir.path()) == 0);
  const auto p = read_csv(dir / "p.csv");
  CHECK(p.rows() == 96);
  for (double v : p.column("p")) CHECK(v >= 0.0);

  CHECK(run_cli("symmetry wavy.csv", dir.path()) == 0);
  CHECK(slurp(dir / "cli_stdout.txt").find("rotation") != std::string::npos);

  spit(dir / "sweep.toml",
       "[grid]\nn_points = 32\n[initial]\ncos_2 = 0.1\n[evolution]\nt_end = 0.05\n"
       "[output]\ndirectory = \".\"\n");
  REQUIRE(run_cli("sweep sweep.toml --eps 1e-2,5e-3,2.5e-3", dir.path()) == 0);
  const auto s = read_csv(dir / "sweep.csv");
  CHECK(s.header == std::vector<std::string>{"eps", "l2_gap_to_next"});
  CHECK(s.rows() == 3);
  CHECK(std::isnan(s.column("l2_gap_to_next").back()));
  CHECK(run_cli("sweep sweep.toml --eps 1e-3,1e-2", dir.path()) == 1);
}

}  // TEST_SUITE
