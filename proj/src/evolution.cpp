#include "helios/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helios/errors.hpp"
#include "helios/parallel.hpp"

namespace helios {

void EvolutionConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be non-negative");
  }
  if (n_points < 32 || n_points % 2 != 0) {
    throw ParameterError("n_points must be even and >= 32");
  }
  if (dt && (!(*dt > 0.0) || !std::isfinite(*dt))) throw ParameterError("dt must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw ParameterError("cfl_safety must lie in (0, 1]");
  }
  if (save_every == 0) throw ParameterError("save_every must be positive");
}

namespace {

struct RateEval {
  Samples rate;
  Samples g_of;
};

RateEval evaluate_rate(const BoundaryCurve& c) {
  const auto ops = OperatorSet::assemble(c);
  RateEval r;
  r.g_of = apply_dtn(ops, c.eta()).g_of;
  r.rate.resize(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    r.rate[j] = -std::exp(-2.0 * c.eta()[j]) * (r.g_of[j] - 1.0);
  }
  return r;
}

void check_blow_up(std::span<const double> eta, double t) {
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (!std::isfinite(eta[j]) || std::abs(eta[j]) > kBlowUpBound) {
      std::ostringstream msg;
      msg << "interface blow-up at node " << j << ", t = " << t << " (eta = " << eta[j] << ")";
      throw BlowUpError(msg.str(), j, t);
    }
  }
}

Samples implicit_diffusion(const PeriodicGrid& grid, Samples eta, double dt, double epsilon) {
  if (epsilon == 0.0) return eta;
  auto spec = detail::forward_dft(eta);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = static_cast<double>(grid.wavenumber(j));
    spec[j] /= 1.0 + epsilon * dt * k * k;
  }
  return detail::inverse_dft_real(spec);
}

// Midpoint step reusing an already evaluated first-stage rate.
BoundaryCurve advance(const BoundaryCurve& c, const RateEval& first, double dt, double epsilon,
                      double t) {
  const auto& grid = c.grid();
  const std::size_t n = c.size();
  Samples mid(n);
  for (std::size_t j = 0; j < n; ++j) mid[j] = c.eta()[j] + 0.5 * dt * first.rate[j];
  check_blow_up(mid, t + 0.5 * dt);
  const auto second = evaluate_rate(BoundaryCurve::from_eta(grid, mid));

  Samples next(n);
  for (std::size_t j = 0; j < n; ++j) next[j] = c.eta()[j] + dt * second.rate[j];
  next = implicit_diffusion(grid, std::move(next), dt, epsilon);
  check_blow_up(next, t + dt);
  return BoundaryCurve::from_eta(grid, next);
}

double max_abs_minus_one(std::span<const double> g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v - 1.0));
  return m;
}

StepDiagnostics diagnose(const BoundaryCurve& c, std::span<const double> g_of, double t) {
  double taylor = -std::numeric_limits<double>::infinity();
  for (double v : g_of) taylor = std::max(taylor, v - 1.0);
  return {t, curve_stats(c), taylor};
}

}  // namespace

Samples rhs(const BoundaryCurve& c) { return evaluate_rate(c).rate; }

BoundaryCurve step(const BoundaryCurve& c, double dt, double epsilon) {
  if (!(dt > 0.0)) throw ParameterError("step: dt must be positive");
  if (!(epsilon >= 0.0)) throw ParameterError("step: epsilon must be non-negative");
  return advance(c, evaluate_rate(c), dt, epsilon, 0.0);
}

double auto_time_step(const BoundaryCurve& c, std::span<const double> g_of, double cfl_safety) {
  const double min_eta = *std::min_element(c.eta().begin(), c.eta().end());
  return cfl_safety * c.grid().spacing() * std::exp(2.0 * min_eta) /
         (1.0 + max_abs_minus_one(g_of));
}

EvolutionRun simulate(const EvolutionConfig& config, std::span<const double> eta0) {
  config.validate();
  const PeriodicGrid grid(config.n_points);
  detail::require_length(grid, eta0.size(), "simulate");

  EvolutionRun run;
  run.config = config;
  auto curve = BoundaryCurve::from_eta(grid, eta0);
  run.times.push_back(0.0);
  run.snapshots.emplace_back(eta0.begin(), eta0.end());

  // Fixed steps are shrunk so an integer count lands on t_end.
  std::size_t fixed_steps = 0;
  double fixed_dt = 0.0;
  if (config.dt) {
    fixed_steps = static_cast<std::size_t>(std::ceil(config.t_end / *config.dt - 1e-9));
    fixed_steps = std::max<std::size_t>(fixed_steps, 1);
    fixed_dt = config.t_end / static_cast<double>(fixed_steps);
  }

  double t = 0.0;
  double dt = fixed_dt;
  std::size_t n_step = 0;
  bool done = false;
  while (!done) {
    const auto first = evaluate_rate(curve);
    run.diagnostics.push_back(diagnose(curve, first.g_of, t));

    if (config.dt) {
      done = n_step + 1 == fixed_steps;
      dt = fixed_dt;
    } else {
      if (n_step % 10 == 0) dt = auto_time_step(curve, first.g_of, config.cfl_safety);
      if (t + dt >= config.t_end * (1.0 - 1e-12)) {
        dt = config.t_end - t;
        done = true;
      }
    }

    curve = advance(curve, first, dt, config.epsilon, t);
    ++n_step;
    t = done ? config.t_end
             : (config.dt ? fixed_dt * static_cast<double>(n_step) : t + dt);

    if (done || n_step % config.save_every == 0) {
      run.times.push_back(t);
      run.snapshots.emplace_back(curve.eta().begin(), curve.eta().end());
    }
  }
  const auto last = evaluate_rate(curve);
  run.diagnostics.push_back(diagnose(curve, last.g_of, t));
  return run;
}

double l2_distance(const PeriodicGrid& grid, std::span<const double> a,
                   std::span<const double> b) {
  detail::require_length(grid, a.size(), "l2_distance");
  detail::require_length(grid, b.size(), "l2_distance");
  Samples d2(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d2[j] = (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(trapezoid_integral(grid, d2));
}

SweepReport vanishing_viscosity_sweep(const EvolutionConfig& config,
                                      std::span<const double> eta0,
                                      std::span<const double> eps_levels) {
  config.validate();
  const PeriodicGrid grid(config.n_points);
  detail::require_length(grid, eta0.size(), "vanishing_viscosity_sweep");
  if (eps_levels.empty()) throw ParameterError("sweep: no viscosity levels given");
  for (std::size_t k = 0; k < eps_levels.size(); ++k) {
    if (!(eps_levels[k] > 0.0)) throw ParameterError("sweep: viscosity levels must be positive");
    if (k > 0 && !(eps_levels[k] < eps_levels[k - 1])) {
      throw ParameterError("sweep: viscosity levels must be strictly decreasing");
    }
  }

  SweepReport report;
  report.eps_levels.assign(eps_levels.begin(), eps_levels.end());
  report.final_eta.resize(eps_levels.size());
  report.lipschitz_final.resize(eps_levels.size());
  report.lipschitz_initial = curve_stats(BoundaryCurve::from_eta(grid, eta0)).lipschitz_norm;

  parallel_for(eps_levels.size(), [&](std::size_t k) {
    EvolutionConfig level = config;
    level.epsilon = eps_levels[k];
    level.save_every = std::numeric_limits<std::size_t>::max();
    const Samples start = mollify(grid, eta0, eps_levels[k]);
    auto run = simulate(level, start);
    report.lipschitz_final[k] = run.diagnostics.back().stats.lipschitz_norm;
    report.final_eta[k] = std::move(run.snapshots.back());
  }, 1);

  for (std::size_t k = 0; k + 1 < eps_levels.size(); ++k) {
    report.l2_gaps.push_back(l2_distance(grid, report.final_eta[k], report.final_eta[k + 1]));
  }
  return report;
}

}  // namespace helios
