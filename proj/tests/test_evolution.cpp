#include <cmath>
#include <limits>

#include "doctest.h"
#include "helios/dtn.hpp"
#include "helios/errors.hpp"
#include "helios/evolution.hpp"
#include "oracles.hpp"

using namespace helios;
using oracle::pi;

namespace {

Samples sample(std::size_t n, double (*f)(double)) { return PeriodicGrid(n).sample(f); }

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("rhs on circles") {
  const PeriodicGrid g(64);
  for (double r : {0.5, 1.0, 2.0}) {
    for (double v : rhs(curve_from_eta(g, Samples(64, std::log(r))))) {
      CHECK(v == doctest::Approx(1.0 / (r * r)).epsilon(1e-13));
    }
  }
}

TEST_CASE("rhs off the circle is positive and matches the collocation DtN") {
  // Gη ≤ 1 gives positivity only; where Gη > 0 the rate sits below e^{-2η}.
  const PeriodicGrid g(128);
  const auto eta = g.sample([](double a) { return 0.2 * std::cos(2 * a); });
  const auto c = curve_from_eta(g, eta);
  const auto r = rhs(c);
  const auto orc = dtn_oracle_collocation(c, eta, 60);
  REQUIRE(orc.misfit < kOracleMisfitGate);
  bool below = false;
  for (std::size_t j = 0; j < r.size(); ++j) {
    CHECK(r[j] > 0.0);
    CHECK(std::abs(r[j] - std::exp(-2 * eta[j]) * (1.0 - orc.g_of[j])) < 1e-8);
    below = below || r[j] < std::exp(-2 * eta[j]);
  }
  CHECK(below);
}

TEST_CASE("one step on the unit circle follows the radial law") {
  const PeriodicGrid g(64);
  const double dt = 1e-4;
  const auto c = curve_from_eta(g, Samples(64, 0.0));
  const auto n0 = step(c, dt, 0.0);
  const auto n1 = step(c, dt, 0.37);
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(std::abs(n0.h()[j] - std::sqrt(1.0 + 2.0 * dt)) < 1e-11);
    CHECK(n1.eta()[j] == doctest::Approx(n0.eta()[j]).epsilon(1e-15));
  }
}

TEST_CASE("step errors") {
  const PeriodicGrid g(32);
  const auto c = curve_from_eta(g, g.sample([](double a) { return 0.5 * std::cos(5 * a); }));
  CHECK_THROWS_AS(step(c, 0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(step(c, 1e-3, -1.0), ParameterError);
  try {
    step(c, 100.0, 0.0);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.node() < 32);
  }
}

TEST_CASE("Lipschitz norm is non-increasing step by step") {
  EvolutionConfig cfg;
  cfg.n_points = 64;
  cfg.t_end = 0.2;
  const auto run = simulate(cfg, sample(64, [](double a) { return 0.2 * std::sin(2 * a); }));
  CHECK(run.diagnostics.size() > 10);
  for (std::size_t i = 1; i < run.diagnostics.size(); ++i) {
    CHECK(run.diagnostics[i].stats.lipschitz_norm <=
          run.diagnostics[i - 1].stats.lipschitz_norm + 1e-8);
  }
}

TEST_CASE("radial run, envelope and area law on short horizons") {
  EvolutionConfig cfg;
  cfg.n_points = 64;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const auto radial = simulate(cfg, Samples(64, 0.0));
  for (double v : radial.snapshots.back()) CHECK(std::abs(std::exp(v) / std::sqrt(1.2) - 1.0) < 1e-6);

  // The area defect of the midpoint step is O(dt²); 1e-4 keeps it well below 1e-6.
  cfg.dt = 1e-4;
  const auto run = simulate(cfg, sample(64, [](double a) { return 0.2 * std::sin(2 * a); }));
  const double a0 = run.diagnostics.front().stats.area;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double t = run.times[k];
    const auto st = curve_stats(curve_from_eta(PeriodicGrid(64), run.snapshots[k]));
    CHECK(st.max_h <= std::sqrt(std::exp(0.4) + 2 * t) + 1e-6);
    CHECK(st.min_h >= std::sqrt(std::exp(-0.4) + 2 * t) - 1e-6);
    CHECK(std::abs(st.area - a0 - 2 * pi * t) / a0 < 1e-6);
  }
}

TEST_CASE("fixed steps land exactly on t_end; snapshots follow the stride") {
  EvolutionConfig cfg;
  cfg.n_points = 32;
  cfg.dt = 0.03;
  cfg.t_end = 0.1;
  cfg.save_every = 2;
  const auto run = simulate(cfg, Samples(32, 0.0));
  CHECK(run.diagnostics.size() == 5);  // 4 steps + initial
  CHECK(run.times.size() == 3);       // t = 0, after step 2, after step 4
  CHECK(run.times.back() == 0.1);
  CHECK(run.times[1] == doctest::Approx(0.05));
  CHECK(run.diagnostics.back().t == 0.1);
  for (std::size_t k = 1; k < run.times.size(); ++k) CHECK(run.times[k] > run.times[k - 1]);
}

TEST_CASE("auto step rule") {
  const PeriodicGrid g(64);
  const auto c = curve_from_eta(g, Samples(64, std::log(2.0)));
  const Samples g_of(64, 0.0);
  // circle radius 2: dt = safety·Δα·4/(1 + 1)
  CHECK(auto_time_step(c, g_of, 0.5) == doctest::Approx(0.5 * g.spacing() * 4.0 / 2.0));
}

TEST_CASE("configuration and input validation") {
  EvolutionConfig cfg;
  cfg.n_points = 16;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.n_points = 34;
  CHECK_NOTHROW(cfg.validate());
  cfg.t_end = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.t_end = 1.0;
  cfg.epsilon = -1e-3;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.epsilon = 0.0;
  cfg.cfl_safety = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.cfl_safety = 0.5;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.dt.reset();
  Samples bad(34, 0.0);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(simulate(cfg, bad), InputError);
  CHECK_THROWS_AS(simulate(cfg, Samples(32, 0.0)), InputShapeError);
}

TEST_CASE("sweep: constants are invisible to diffusion") {
  EvolutionConfig cfg;
  cfg.n_points = 32;
  cfg.dt = 1e-4;
  cfg.t_end = 0.2;
  const std::vector<double> levels = {1e-2, 5e-3, 2.5e-3};
  const auto rep = vanishing_viscosity_sweep(cfg, Samples(32, 0.0), levels);
  for (const auto& f : rep.final_eta) {
    for (double v : f) CHECK(std::abs(std::exp(v) - std::sqrt(1.4)) < 1e-8);
  }
  for (double gap : rep.l2_gaps) CHECK(gap < 1e-8);
}

TEST_CASE("sweep: triangle wave") {
  EvolutionConfig cfg;
  cfg.n_points = 128;
  cfg.t_end = 0.1;
  const PeriodicGrid g(128);
  const auto tri = g.sample([](double a) { return 0.3 * (std::min(a, 2 * pi - a) - pi / 2) / pi * 2; });
  const std::vector<double> levels = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  const auto rep = vanishing_viscosity_sweep(cfg, tri, levels);
  for (std::size_t k = 1; k < rep.l2_gaps.size(); ++k) CHECK(rep.l2_gaps[k] < rep.l2_gaps[k - 1]);
  for (double l : rep.lipschitz_final) CHECK(l <= rep.lipschitz_initial + 1e-4);
}

TEST_CASE("sweep level validation") {
  EvolutionConfig cfg;
  cfg.n_points = 32;
  const Samples e(32, 0.0);
  CHECK_THROWS_AS(vanishing_viscosity_sweep(cfg, e, std::vector<double>{1e-3, 1e-2}), ParameterError);
  CHECK_THROWS_AS(vanishing_viscosity_sweep(cfg, e, std::vector<double>{1e-3, 0.0}), ParameterError);
  CHECK_THROWS_AS(vanishing_viscosity_sweep(cfg, e, std::vector<double>{}), ParameterError);
}

TEST_CASE("l2 distance") {
  const PeriodicGrid g(32);
  CHECK(l2_distance(g, Samples(32, 1.0), Samples(32, 0.0)) == doctest::Approx(std::sqrt(2 * pi)));
}

}  // TEST_SUITE
