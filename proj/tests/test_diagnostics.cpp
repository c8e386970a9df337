#include <optional>
#include <cmath>

#include "doctest.h"
#include "helios/diagnostics.hpp"
#include "helios/errors.hpp"
#include "helios/io.hpp"
#include "oracles.hpp"

using namespace helios;
using oracle::Complex;
using oracle::pi;

namespace {

EvolutionRun short_run(double (*f)(double), std::size_t n = 64, double t_end = 0.2,
                       std::optional<double> dt = std::nullopt) {
  EvolutionConfig cfg;
  cfg.n_points = n;
  cfg.t_end = t_end;
  cfg.dt = dt;
  return simulate(cfg, PeriodicGrid(n).sample(f));
}

const InvariantCheck& find(const InvariantReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("pressure in a disk") {
  const PeriodicGrid g(64);
  for (double r : {1.0, 2.5}) {
    const auto c = curve_from_eta(g, Samples(64, std::log(r)));
    const auto pf = reconstruct_pressure(c, 12, 16, 0.1);
    CHECK(pf.r.size() == 12 * 16);
    for (std::size_t i = 0; i < pf.r.size(); ++i) {
      CHECK(std::abs(pf.phi[i] - std::log(r)) < 1e-12);
      CHECK(std::abs(pf.p[i] - std::log(r / pf.r[i])) < 1e-12);
    }
    CHECK(pf.boundary_misfit < 1e-12);
    CHECK_FALSE(pf.accuracy_warning);
  }
  const auto unit = curve_from_eta(g, Samples(64, 0.0));
  const auto ops = assemble(unit);
  const HarmonicExtension ext(ops, unit.eta());
  for (double th : {0.0, 1.0, 4.0}) {
    const Complex w = std::polar(0.5, th);
    CHECK(std::abs(std::max(ext(w) - std::log(0.5), 0.0) - std::log(2.0)) < 1e-8);
  }
}

TEST_CASE("pressure on a perturbed curve: sign, harmonicity, boundary values") {
  const PeriodicGrid g(128);
  const auto eta = g.sample([](double a) { return 0.1 * std::cos(a); });
  const auto c = curve_from_eta(g, eta);
  const auto pf = reconstruct_pressure(c, 24, 48, 0.1);
  for (double p : pf.p) CHECK(p >= -1e-8);
  CHECK(pf.boundary_misfit < 1e-6);
  CHECK(pf.max_boundary_pressure <= 1e-6);

  // 5-point Laplacian in polar coordinates on a patch away from the boundary
  // and the origin.
  const auto ops = assemble(c);
  const HarmonicExtension ext(ops, eta);
  const double hr = 1e-3, ht = 1e-3;
  double worst = 0.0;
  for (double r : {0.3, 0.5, 0.7}) {
    for (double th = 0.0; th < 2 * pi; th += 0.7) {
      auto phi = [&](double rr, double tt) { return ext(std::polar(rr, tt)); };
      const double c0 = phi(r, th);
      const double lap = (phi(r + hr, th) - 2 * c0 + phi(r - hr, th)) / (hr * hr) +
                         (phi(r + hr, th) - phi(r - hr, th)) / (2 * hr * r) +
                         (phi(r, th + ht) - 2 * c0 + phi(r, th - ht)) / (ht * ht * r * r);
      worst = std::max(worst, std::abs(lap));
    }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("harmonic extension reproduces analytic data up to the boundary") {
  const std::size_t n = 256;
  const oracle::TrigPoly eta{0.0, {{1, 0.15, 0.0}, {3, 0.0, 0.08}}};
  const PeriodicGrid g(n);
  const auto c = curve_from_eta(g, eta.sample(n));
  auto F = [](Complex z) { return z * z + 0.5 * std::exp(z) + Complex(0, 0.3) * z; };
  auto dF = [](Complex z) { return 2.0 * z + 0.5 * std::exp(z) + Complex(0, 0.3); };
  const auto data = oracle::harmonic_data(eta, n, F, dF);
  const auto ops = assemble(c);
  const HarmonicExtension ext(ops, data.g);
  for (double frac : {0.0, 0.3, 0.9, 0.999, 0.99999}) {
    for (double th : {0.05, 1.3, 2.9, 4.4}) {
      const Complex w = std::polar(frac * std::exp(eta(th)), th);
      CHECK(std::abs(ext(w) - F(w).real()) < 1e-10);
      // The analytic completion agrees up to the free imaginary constant.
      if (frac < 0.95) {
        const Complex off = ext.analytic(0.0) - F(0.0);
        CHECK(std::abs(ext.analytic(w) - off - F(w)) < 1e-10);
      }
    }
  }
  // Plain quadrature is fine away from the boundary.
  CHECK(std::abs(ext.double_layer(Complex(0.2, 0.1)) - F(Complex(0.2, 0.1)).real()) < 1e-12);
  // Cauchy-Riemann on the boundary: ∂_α ψ = G(h) f.
  const auto dpsi = spectral_derivative(g, ext.conjugate_trace());
  CHECK(oracle::sup_diff(dpsi, data.G) < 1e-9);
  CHECK(ext.solve_residual() < 1e-12);
}

TEST_CASE("unit density calibration holds inside") {
  const PeriodicGrid g(128);
  const auto c = curve_from_eta(g, g.sample([](double a) { return 0.2 * std::sin(2 * a); }));
  for (Complex w : {Complex(0, 0), Complex(0.3, -0.2), Complex(-0.5, 0.1)}) {
    CHECK(std::abs(unit_density_potential(c, w) - 1.0) < 1e-12);
  }
  CHECK(std::abs(unit_density_potential(c, Complex(3.0, 0.0))) < 1e-12);
}

TEST_CASE("pressure parameter and calibration errors") {
  const PeriodicGrid g(64);
  const auto c = curve_from_eta(g, Samples(64, 0.0));
  CHECK_THROWS_AS(reconstruct_pressure(c, 8, 8, 0.0), ParameterError);
  CHECK_THROWS_AS(reconstruct_pressure(c, 8, 8, 0.3), ParameterError);
  CHECK_THROWS_AS(reconstruct_pressure(c, 1, 8, 0.1), ParameterError);
  // An under-resolved curve passes the disk calibration but is flagged, not silent.
  const PeriodicGrid g16(16);
  const auto rough = curve_from_eta(g16, g16.sample([](double a) { return 0.6 * std::cos(7 * a); }));
  const auto field = reconstruct_pressure(rough, 4, 4, 1e-3);
  CHECK(field.boundary_misfit > kPressureMisfitWarning);
  CHECK(field.accuracy_warning);
}

TEST_CASE("corner experiment") {
  const auto obtuse = corner_experiment(CornerKind::obtuse, 2.0, 0.05);
  CHECK(obtuse.classification == "moved");
  CHECK(obtuse.h_final - obtuse.h_initial > obtuse.threshold);
  const auto acute = corner_experiment(CornerKind::acute, 1.0, 0.02);
  CHECK(acute.classification == "waiting");
  CHECK(acute.slope == doctest::Approx(1.0 / std::tan(0.5)));
  CHECK(acute.times.size() == acute.tip_radius.size());

  CornerSetup s;
  s.n_points = 64;
  const auto circle = track_tip(Samples(64, std::log(0.5)), 0, 0.01, s);
  CHECK(circle.mollification_amplitude < 1e-14);
  CHECK(circle.classification == "moved");

  CHECK_THROWS_AS(corner_experiment(CornerKind::acute, 2.0, 0.01), ParameterError);
  CHECK_THROWS_AS(corner_experiment(CornerKind::obtuse, 1.0, 0.01), ParameterError);
  CHECK_THROWS_AS(corner_experiment(CornerKind::obtuse, 2.0, -1.0), ParameterError);
}

TEST_CASE("corner profile has the requested slopes") {
  const PeriodicGrid g(1024);
  CornerSetup s;
  const auto eta = corner_profile(g, 1.0, s);
  const double slope = 1.0 / std::tan(0.5);
  CHECK(std::exp(eta[0]) == doctest::Approx(s.base_radius));
  CHECK((eta[0] - eta[1]) / g.spacing() == doctest::Approx(slope).epsilon(0.01));
  CHECK((eta[0] - eta[1023]) / g.spacing() == doctest::Approx(slope).epsilon(0.01));
}

TEST_CASE("invariant suite on a radial run") {
  EvolutionConfig cfg;
  cfg.n_points = 32;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  const auto run = simulate(cfg, Samples(32, 0.0));
  const auto rep = invariant_suite(run);
  CHECK(rep.all_passed());
  for (const auto& c : rep.checks) {
    if (c.applicable && c.tolerance > 0) CHECK(c.margin > 0.9 * c.tolerance - 1e-8);
  }
}

TEST_CASE("invariant suite on a wavy run, and purity") {
  // Fixed dt: the area defect of the midpoint step is O(dt²) and the auto step leaves ~1e-4.
  const auto run = short_run([](double a) { return 0.2 * std::sin(2 * a); }, 64, 0.2, 1e-3);
  const auto rep = invariant_suite(run);
  for (const auto& c : rep.checks) {
    INFO(c.name << " margin " << c.margin);
    CHECK(c.passed);
  }
  CHECK(report_json(rep) == report_json(invariant_suite(run)));
  CHECK_FALSE(find(rep, "asymptotic_roundness").applicable);
}

TEST_CASE("corrupted snapshots are detected") {
  auto run = short_run([](double a) { return 0.2 * std::sin(2 * a); });
  for (std::size_t k : {std::size_t{0}, run.snapshots.size() / 2, run.snapshots.size() - 1}) {
    auto bad = run;
    bad.snapshots[k][5] += 0.1;
    const auto rep = invariant_suite(bad);
    CHECK_FALSE(rep.all_passed());
    CHECK_FALSE(find(rep, "lipschitz_bound").passed);
  }
  auto swapped = run;
  std::swap(swapped.times[1], swapped.times[2]);
  CHECK_FALSE(find(invariant_suite(swapped), "times_increasing").passed);
}

TEST_CASE("area law applies only without viscosity") {
  EvolutionConfig cfg;
  cfg.n_points = 32;
  cfg.t_end = 0.05;
  cfg.epsilon = 1e-2;
  const auto run = simulate(cfg, PeriodicGrid(32).sample([](double a) { return 0.1 * std::cos(3 * a); }));
  const auto rep = invariant_suite(run);
  CHECK_FALSE(find(rep, "area_law").applicable);
  CHECK(rep.all_passed());
}

TEST_CASE("comparison and scaling checks") {
  EvolutionConfig cfg;
  cfg.n_points = 64;
  cfg.t_end = 0.1;
  cfg.dt = 1e-3;
  cfg.save_every = 10;
  const PeriodicGrid g(64);
  const auto lo = g.sample([](double a) { return 0.2 * std::cos(2 * a) + 0.1 * std::sin(a); });
  Samples hi = lo;
  for (double& v : hi) v += 0.1;
  const auto rl = simulate(cfg, lo);
  const auto rh = simulate(cfg, hi);
  CHECK(comparison_check(rl, rh).passed);
  CHECK_FALSE(comparison_check(rh, rl).passed);

  EvolutionConfig scaled = cfg;
  scaled.t_end = 4.0 * cfg.t_end;
  scaled.dt = 4.0 * *cfg.dt;
  Samples lo2 = lo;
  for (double& v : lo2) v += std::log(2.0);
  const auto r2 = simulate(scaled, lo2);
  const auto chk = scaling_check(rl, r2, 2.0);
  CHECK(chk.passed);
  CHECK(chk.margin > 0.9e-6);
  CHECK_THROWS_AS(scaling_check(rl, rh, 2.0), InputError);
}

TEST_CASE("symmetry defects are at rounding level") {
  const PeriodicGrid g(64);
  const auto c = curve_from_eta(g, g.sample([](double a) { return 0.2 * std::cos(a) + 0.1 * std::sin(3 * a); }));
  const auto d = symmetry_defects(c, 16, 2.0);
  CHECK(d.rotation <= kRotationTolerance);
  CHECK(d.scaling <= kScalingTolerance);
  CHECK(d.dtn_adjoint <= kAdjointTolerance);
  CHECK(d.dtn_flux <= kFluxTolerance);
}

TEST_CASE("holder seminorm") {
  const PeriodicGrid g(256);
  const auto f = g.sample([](double a) { return std::cos(a); });
  const double lip = holder_seminorm(g, f, 1.0);
  CHECK(lip <= 1.0);
  CHECK(lip > 0.999);
  CHECK(holder_seminorm(g, Samples(256, 3.0), 0.5) == 0.0);
  // at distances below 1 the half-Hölder quotient dominates the Lipschitz one
  CHECK(holder_seminorm(g, f, 0.5) >= lip * std::sqrt(g.spacing()));
}

}  // TEST_SUITE
