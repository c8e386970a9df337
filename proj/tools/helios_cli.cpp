// Command-line front end: simulate, dtn, verify, sweep, pressure, symmetry.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "helios/config.hpp"
#include "helios/diagnostics.hpp"
#include "helios/errors.hpp"
#include "helios/io.hpp"

namespace fs = std::filesystem;
using namespace helios;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBlowUp = 2;
constexpr int kExitCheckFailed = 3;

int cmd_simulate(const fs::path& config_path, const std::optional<fs::path>& out_override,
                 bool gnuplot) {
  const auto cfg = load_run_config(config_path);
  const auto eta0 = initial_eta(cfg);
  const fs::path dir = out_override ? *out_override : cfg.output.directory;
  const auto run = simulate(cfg.evolution, eta0);
  write_run_directory(dir, run);
  if (gnuplot || cfg.output.wants("gnuplot")) write_gnuplot_script(dir / "plot.gp", PlotKind::run);
  const auto& last = run.diagnostics.back().stats;
  std::printf("wrote %s: %zu steps, t = %.17g, h in [%.17g, %.17g]\n", dir.string().c_str(),
              run.diagnostics.size() - 1, run.times.back(), last.min_h, last.max_h);
  return kExitOk;
}

int cmd_dtn(const fs::path& curve_path, const fs::path& g_path, bool oracle, std::size_t modes,
            const std::optional<fs::path>& out, bool gnuplot) {
  const auto eta = read_curve_csv(curve_path);
  const PeriodicGrid grid(eta.size());
  const auto g = read_boundary_data_csv(g_path, grid);
  const auto curve = BoundaryCurve::from_eta(grid, eta);
  const auto ops = OperatorSet::assemble(curve);
  const auto res = apply_dtn(ops, g);

  std::vector<std::string> header = {"alpha", "theta", "G"};
  std::vector<std::vector<double>> cols = {Samples(grid.nodes().begin(), grid.nodes().end()), res.theta, res.g_of};
  if (oracle) {
    if (modes == 0) modes = std::min<std::size_t>(32, grid.size() / 2 - 1);
    const auto orc = dtn_oracle_collocation(curve, g, modes);
    header.push_back("G_oracle");
    cols.push_back(orc.g_of);
    std::fprintf(stderr, "oracle misfit %.3e\n", orc.misfit);
  }
  const auto text = csv_string(header, cols);
  if (out) {
    write_csv(*out, header, cols);
    if (gnuplot) write_gnuplot_script(out->parent_path() / "plot.gp", PlotKind::dtn);
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
  return kExitOk;
}

int cmd_pressure_to(const BoundaryCurve& curve, std::size_t nr, std::size_t ntheta,
                    std::optional<double> rmin, const fs::path& out) {
  const double r0 = rmin ? *rmin : curve_stats(curve).min_h / 8.0;
  const auto field = reconstruct_pressure(curve, nr, ntheta, r0);
  write_pressure_csv(out, field);
  if (field.accuracy_warning) {
    std::fprintf(stderr, "warning: pressure boundary misfit %.3e exceeds %.0e\n",
                 field.boundary_misfit, kPressureMisfitWarning);
  }
  return kExitOk;
}

int cmd_verify(const fs::path& run_dir, std::size_t nr, std::size_t ntheta,
               std::optional<double> rmin, bool gnuplot) {
  const auto run = read_run_directory(run_dir);
  const auto report = invariant_suite(run);
  const auto text = report_json(report);
  {
    std::ofstream f(run_dir / "report.json", std::ios::binary);
    if (!f) throw InputError("cannot write report.json");
    f << text;
  }
  const PeriodicGrid grid(run.snapshots.back().size());
  cmd_pressure_to(BoundaryCurve::from_eta(grid, run.snapshots.back()), nr, ntheta, rmin,
                  run_dir / "pressure.csv");
  if (gnuplot) write_gnuplot_script(run_dir / "pressure.gp", PlotKind::pressure);
  for (const auto& c : report.checks) {
    if (!c.applicable) {
      std::printf("%-22s n/a   (%s)\n", c.name.c_str(), c.detail.c_str());
    } else {
      std::printf("%-22s %s margin %.3e\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.margin);
    }
  }
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const fs::path& config_path, const std::vector<double>& eps,
              const std::optional<fs::path>& out, bool gnuplot) {
  const auto cfg = load_run_config(config_path);
  // The sweep mollifies per level itself; it starts from the unmollified data.
  auto raw = cfg;
  raw.initial.mollify_eps.reset();
  const auto eta0 = initial_eta(raw);
  const auto rep = vanishing_viscosity_sweep(cfg.evolution, eta0, eps);
  std::vector<double> gaps(rep.eps_levels.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < rep.l2_gaps.size(); ++k) gaps[k] = rep.l2_gaps[k];
  const fs::path path = out ? *out : cfg.output.directory / "sweep.csv";
  write_csv(path, {"eps", "l2_gap_to_next"}, {rep.eps_levels, gaps});
  if (gnuplot || cfg.output.wants("gnuplot")) {
    write_gnuplot_script(path.parent_path() / "sweep.gp", PlotKind::sweep);
  }
  for (std::size_t k = 0; k < rep.l2_gaps.size(); ++k) {
    std::printf("eps %.3e -> %.3e  gap %.6e\n", rep.eps_levels[k], rep.eps_levels[k + 1],
                rep.l2_gaps[k]);
  }
  return kExitOk;
}

int cmd_symmetry(const fs::path& curve_path, std::size_t shift, double lambda) {
  const auto eta = read_curve_csv(curve_path);
  const PeriodicGrid grid(eta.size());
  const auto c = BoundaryCurve::from_eta(grid, eta);
  if (shift == 0) shift = grid.size() / 4;
  const auto d = symmetry_defects(c, shift, lambda);
  bool ok = true;
  auto line = [&](const char* name, double v, double tol) {
    const bool pass = v <= tol;
    ok = ok && pass;
    std::printf("%-12s %s defect %.3e  margin %.3e\n", name, pass ? "PASS" : "FAIL", v, tol - v);
  };
  line("rotation", d.rotation, kRotationTolerance);
  line("scaling", d.scaling, kScalingTolerance);
  line("dtn_adjoint", d.dtn_adjoint, kAdjointTolerance);
  line("dtn_flux", d.dtn_flux, kFluxTolerance);
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helios: star-shaped Hele-Shaw interface solver"};
  app.require_subcommand(1);
  app.fallthrough();
  bool gnuplot = false;
  app.add_flag("--emit-gnuplot", gnuplot, "also write a gnuplot script next to the CSV output");

  fs::path config_path, curve_path, g_path, run_dir;
  std::optional<fs::path> out;
  bool oracle = false;
  std::size_t modes = 0, nr = 32, ntheta = 64, shift = 0;
  std::optional<double> rmin;
  std::vector<double> eps;
  double lambda = 2.0;

  auto* sim = app.add_subcommand("simulate", "run the interface evolution from a config file");
  sim->add_option("config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("-o,--output", out, "run directory (overrides [output] directory)");

  auto* dtn = app.add_subcommand("dtn", "apply the Dirichlet-to-Neumann map to boundary data");
  dtn->add_option("curve", curve_path, "curve CSV (alpha,eta,h)")->required()->check(CLI::ExistingFile);
  dtn->add_option("g", g_path, "boundary data CSV (alpha,g)")->required()->check(CLI::ExistingFile);
  dtn->add_flag("--oracle", oracle, "append the harmonic-collocation oracle column");
  dtn->add_option("--modes", modes, "oracle modes (default min(32, N/2-1))");
  dtn->add_option("-o,--output", out, "output CSV (default stdout)");

  auto* ver = app.add_subcommand("verify", "run the invariant suite on a run directory");
  ver->add_option("run_dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);

  auto* swp = app.add_subcommand("sweep", "vanishing-viscosity sweep");
  swp->add_option("config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
  swp->add_option("--eps", eps, "strictly decreasing viscosity levels")->required()->delimiter(',');
  swp->add_option("-o,--output", out, "output CSV (default <output dir>/sweep.csv)");

  auto* prs = app.add_subcommand("pressure", "reconstruct the pressure inside a curve");
  prs->add_option("curve", curve_path, "curve CSV")->required()->check(CLI::ExistingFile);
  prs->add_option("-o,--output", out, "output CSV (default pressure.csv)");

  for (auto* sub : {ver, prs}) {
    sub->add_option("--nr", nr, "radial grid size")->check(CLI::Range(2, 1 << 20));
    sub->add_option("--ntheta", ntheta, "angular grid size")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--rmin", rmin, "innermost radius (default min h / 8)");
  }

  auto* sym = app.add_subcommand("symmetry", "rotation, scaling and DtN symmetry checks");
  sym->add_option("curve", curve_path, "curve CSV")->required()->check(CLI::ExistingFile);
  sym->add_option("--shift", shift, "rotation in nodes (default N/4)");
  sym->add_option("--lambda", lambda, "scale factor")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config_path, out, gnuplot);
    if (*dtn) return cmd_dtn(curve_path, g_path, oracle, modes, out, gnuplot);
    if (*ver) return cmd_verify(run_dir, nr, ntheta, rmin, gnuplot);
    if (*swp) return cmd_sweep(config_path, eps, out, gnuplot);
    if (*prs) {
      const auto eta = read_curve_csv(curve_path);
      const PeriodicGrid grid(eta.size());
      const fs::path path = out ? *out : fs::path("pressure.csv");
      const int rc = cmd_pressure_to(BoundaryCurve::from_eta(grid, eta), nr, ntheta, rmin, path);
      if (gnuplot) write_gnuplot_script(path.parent_path() / "pressure.gp", PlotKind::pressure);
      return rc;
    }
    if (*sym) return cmd_symmetry(curve_path, shift, lambda);
  } catch (const BlowUpError& e) {
    std::fprintf(stderr, "blow-up: %s\n", e.what());
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
