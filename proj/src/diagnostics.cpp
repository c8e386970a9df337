#include "helios/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "helios/errors.hpp"
#include "helios/parallel.hpp"

namespace helios {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCalibrationTol = 1e-12;
constexpr double kDensityResidualGate = 1e-10;

}  // namespace

HarmonicExtension::HarmonicExtension(const OperatorSet& ops, std::span<const double> f)
    : curve_(&ops.curve()) {
  const auto& c = ops.curve();
  const auto& grid = c.grid();
  const std::size_t n = c.size();
  detail::require_length(grid, f.size(), "HarmonicExtension");
  const double w = grid.spacing();

  // Interior trace of the double layer is (½I + K_geo)μ, and the stored kdl is
  // -K_geo.
  Eigen::MatrixXd a = -ops.kdl();
  a.diagonal().array() += 0.5;
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd mu = a.partialPivLu().solve(rhs);
  residual_ = (a * mu - rhs).lpNorm<Eigen::Infinity>() / std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (!(residual_ <= kDensityResidualGate)) {
    throw LinearAlgebraError("double-layer density solve did not converge", residual_);
  }
  mu_.assign(mu.data(), mu.data() + n);

  // Conjugate trace ψ = Im F on the boundary: ½Hμ plus the smooth remainder
  // of -(1/2π) Re ∫ μ z'(β)/(z(β) - z(α)) dβ.
  psi_ = hilbert_transform(grid, mu_);
  const auto cot = detail::cot_table(n);
  const auto& z = c.z();
  const auto& dz = c.dz();
  const auto& d2z = c.d2z();
  parallel_for(n, [&](std::size_t j) {
    double acc = -0.25 / kPi * (d2z[j] / dz[j]).real() * mu_[j];
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      const std::size_t d = (j + n - m) % n;
      acc += (-0.5 / kPi * (dz[m] / (z[m] - z[j])).real() - 0.25 / kPi * cot[d]) * mu_[m];
    }
    psi_[j] = 0.5 * psi_[j] + w * acc;
  }, 16);

  boundary_values_.resize(n);
  cauchy_weights_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    boundary_values_[m] = Complex(f[m], psi_[m]);
    cauchy_weights_[m] = w * dz[m];
  }
}

Complex HarmonicExtension::analytic(Complex w) const {
  const auto& z = curve_->z();
  Complex num(0.0, 0.0);
  Complex den(0.0, 0.0);
  for (std::size_t m = 0; m < z.size(); ++m) {
    const Complex diff = z[m] - w;
    if (diff == Complex(0.0, 0.0)) return boundary_values_[m];
    const Complex q = cauchy_weights_[m] / diff;
    num += boundary_values_[m] * q;
    den += q;
  }
  return num / den;
}

double HarmonicExtension::double_layer(Complex w) const {
  const auto& z = curve_->z();
  Complex acc(0.0, 0.0);
  for (std::size_t m = 0; m < z.size(); ++m) acc += cauchy_weights_[m] * mu_[m] / (z[m] - w);
  return acc.imag() / (2.0 * kPi);
}

double unit_density_potential(const BoundaryCurve& c, Complex w) {
  const double dw = c.grid().spacing();
  Complex acc(0.0, 0.0);
  for (std::size_t m = 0; m < c.size(); ++m) acc += dw * c.dz()[m] / (c.z()[m] - w);
  return acc.imag() / (2.0 * kPi);
}

PressureField reconstruct_pressure(const BoundaryCurve& c, std::size_t n_r, std::size_t n_theta,
                                   double r_min) {
  if (n_r < 2 || n_theta < 1) throw ParameterError("pressure: need n_r >= 2 and n_theta >= 1");
  const auto stats = curve_stats(c);
  if (!(r_min > 0.0 && r_min < 0.25 * stats.min_h)) {
    throw ParameterError("pressure: r_min must lie in (0, min h / 4)");
  }

  // Convention check on the unit disk with the same grid, where the trapezoid
  // rule gives D[1](r) = 1 / (1 - r^N) exactly.
  const auto disk = BoundaryCurve::from_eta(c.grid(), Samples(c.size(), 0.0));
  for (double r : {0.0, 0.5}) {
    const double d1 = unit_density_potential(disk, Complex(r, 0.0));
    const double expected = 1.0 / (1.0 - std::pow(r, static_cast<double>(c.size())));
    if (!(std::abs(d1 - expected) <= kCalibrationTol)) {
      std::ostringstream msg;
      msg << "double-layer calibration failed on the unit disk: D[1](" << r << ") = " << d1;
      throw ConventionError(msg.str());
    }
  }

  const auto ops = OperatorSet::assemble(c);
  const HarmonicExtension ext(ops, c.eta());
  const auto& grid = c.grid();
  const TrigInterpolant eta_of(grid, c.eta());

  PressureField out;
  out.n_r = n_r;
  out.n_theta = n_theta;
  out.r_min = r_min;
  const std::size_t total = n_r * n_theta;
  out.r.resize(total);
  out.theta.resize(total);
  out.phi.resize(total);
  out.p.resize(total);

  std::vector<double> outer(n_theta);
  for (std::size_t k = 0; k < n_theta; ++k) {
    const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_theta);
    outer[k] = 0.995 * std::exp(eta_of(th));
    for (std::size_t i = 0; i < n_r; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n_r - 1);
      const std::size_t idx = i * n_theta + k;
      out.theta[idx] = th;
      out.r[idx] = r_min + (outer[k] - r_min) * s;
    }
  }
  parallel_for(total, [&](std::size_t idx) {
    const Complex w = std::polar(out.r[idx], out.theta[idx]);
    out.phi[idx] = ext(w);
    out.p[idx] = std::max(out.phi[idx] - std::log(out.r[idx]), 0.0);
  }, 32);

  // Boundary misfit at the points halfway between nodes, where the evaluator
  // cannot fall back on the nodal values.
  const std::size_t n = c.size();
  std::vector<double> misfit(n), p_bdry(n);
  parallel_for(n, [&](std::size_t j) {
    const double a = grid.node(j) + 0.5 * grid.spacing();
    const double e = eta_of(a);
    const double phi = ext(std::polar(std::exp(e), a));
    misfit[j] = std::abs(phi - e);
    p_bdry[j] = std::max(phi - e, 0.0);
  }, 16);
  out.boundary_misfit = *std::max_element(misfit.begin(), misfit.end());
  out.max_boundary_pressure = *std::max_element(p_bdry.begin(), p_bdry.end());
  out.accuracy_warning = !(out.boundary_misfit <= kPressureMisfitWarning);
  return out;
}

// ---------------------------------------------------------------------------

Samples corner_profile(const PeriodicGrid& grid, double opening_angle, const CornerSetup& setup) {
  if (!(opening_angle > 0.0 && opening_angle < kPi)) {
    throw ParameterError("corner: opening angle must lie in (0, pi)");
  }
  if (!(setup.base_radius > 0.0) || !(setup.kink_width > 0.0)) {
    throw ParameterError("corner: base radius and kink width must be positive");
  }
  const double s = 1.0 / std::tan(0.5 * opening_angle);
  const double a = setup.kink_width;
  Samples eta(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    const double d = std::min(x, 2.0 * kPi - x);
    eta[j] = std::log(setup.base_radius) - s * a * (1.0 - std::exp(-d / a));
  }
  return eta;
}

CornerReport track_tip(std::span<const double> eta_raw, std::size_t node, double duration,
                       const CornerSetup& setup) {
  if (!(duration > 0.0)) throw ParameterError("corner: duration must be positive");
  const PeriodicGrid grid(setup.n_points);
  detail::require_length(grid, eta_raw.size(), "track_tip");
  if (node >= grid.size()) throw ParameterError("corner: node out of range");

  const Samples eta0 = mollify(grid, eta_raw, setup.mollify_eps);
  CornerReport rep;
  rep.mollification_amplitude = std::abs(std::exp(eta0[node]) - std::exp(eta_raw[node]));
  rep.threshold = 10.0 * rep.mollification_amplitude;

  EvolutionConfig cfg;
  cfg.n_points = setup.n_points;
  cfg.t_end = duration;
  cfg.cfl_safety = setup.cfl_safety;
  cfg.save_every = 1;
  const auto run = simulate(cfg, eta0);

  rep.times = run.times;
  rep.tip_radius.reserve(run.snapshots.size());
  for (const auto& s : run.snapshots) rep.tip_radius.push_back(std::exp(s[node]));
  rep.h_initial = rep.tip_radius.front();
  rep.h_final = rep.tip_radius.back();
  double moved = 0.0;
  for (double h : rep.tip_radius) moved = std::max(moved, h - rep.h_initial);
  rep.classification = moved > rep.threshold ? "moved" : "waiting";
  return rep;
}

CornerReport corner_experiment(CornerKind kind, double opening_angle, double duration,
                               const CornerSetup& setup) {
  if (kind == CornerKind::acute && !(opening_angle > 0.0 && opening_angle < 0.5 * kPi)) {
    throw ParameterError("corner: an acute corner needs an opening angle below pi/2");
  }
  if (kind == CornerKind::obtuse && !(opening_angle > 0.5 * kPi && opening_angle < kPi)) {
    throw ParameterError("corner: an obtuse corner needs an opening angle in (pi/2, pi)");
  }
  const PeriodicGrid grid(setup.n_points);
  auto rep = track_tip(corner_profile(grid, opening_angle, setup), 0, duration, setup);
  rep.opening_angle = opening_angle;
  rep.slope = 1.0 / std::tan(0.5 * opening_angle);
  return rep;
}

// ---------------------------------------------------------------------------

SymmetryDefects symmetry_defects(const BoundaryCurve& c, std::size_t shift, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("symmetry: lambda must be positive");
  const auto& grid = c.grid();
  const std::size_t n = c.size();
  shift %= n;
  const auto base = OperatorSet::assemble(c);

  Samples rotated(n), scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    rotated[(j + shift) % n] = c.eta()[j];
    scaled[j] = c.eta()[j] + std::log(lambda);
  }
  const auto rot = OperatorSet::assemble(BoundaryCurve::from_eta(grid, rotated));
  const auto sca = OperatorSet::assemble(BoundaryCurve::from_eta(grid, scaled));

  SymmetryDefects out;
  const std::array<const Eigen::MatrixXd*, 3> mb = {&base.kstar(), &base.kdl(), &base.lambda_reg()};
  const std::array<const Eigen::MatrixXd*, 3> mr = {&rot.kstar(), &rot.kdl(), &rot.lambda_reg()};
  const std::array<const Eigen::MatrixXd*, 3> ms = {&sca.kstar(), &sca.kdl(), &sca.lambda_reg()};
  for (std::size_t q = 0; q < 3; ++q) {
    out.scaling = std::max(out.scaling, (*mb[q] - *ms[q]).cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t m = 0; m < n; ++m) {
        const double d = (*mr[q])((j + shift) % n, (m + shift) % n) - (*mb[q])(j, m);
        out.rotation = std::max(out.rotation, std::abs(d));
      }
    }
  }

  const Samples f = grid.sample([](double a) { return std::cos(a) + 0.5 * std::sin(2.0 * a); });
  const Samples g = grid.sample([](double a) { return std::sin(a) - 0.3 * std::cos(3.0 * a); });
  const auto gf = apply_dtn(base, f).g_of;
  const auto gg = apply_dtn(base, g).g_of;
  double fgg = 0.0, gfg = 0.0, nf = 0.0, ng = 0.0, ngf = 0.0, ngg = 0.0, flux = 0.0, l1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    fgg += f[j] * gg[j];
    gfg += gf[j] * g[j];
    nf += f[j] * f[j];
    ng += g[j] * g[j];
    ngf += gf[j] * gf[j];
    ngg += gg[j] * gg[j];
    flux += gg[j];
    l1 += std::abs(gg[j]);
  }
  out.dtn_adjoint = std::abs(fgg - gfg) / (std::sqrt(nf * ngg) + std::sqrt(ngf * ng));
  out.dtn_flux = std::abs(flux) / l1;
  return out;
}

// ---------------------------------------------------------------------------

bool InvariantReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const InvariantCheck& c) { return !c.applicable || c.passed; });
}

double holder_seminorm(const PeriodicGrid& grid, std::span<const double> eta, double gamma) {
  detail::require_length(grid, eta.size(), "holder_seminorm");
  const std::size_t n = grid.size();
  std::vector<double> dist_pow(n);
  for (std::size_t d = 1; d < n; ++d) {
    const double x = grid.spacing() * static_cast<double>(std::min(d, n - d));
    dist_pow[d] = std::pow(x, gamma);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      best = std::max(best, std::abs(eta[i] - eta[j]) / dist_pow[j - i]);
    }
  }
  return best;
}

namespace {

InvariantCheck make_check(std::string name, double tol, double violation, std::string detail = {}) {
  InvariantCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.margin = tol - violation;
  c.passed = std::isfinite(violation) && violation <= tol;
  c.detail = std::move(detail);
  return c;
}

InvariantCheck not_applicable(std::string name, double tol, std::string why) {
  InvariantCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.applicable = false;
  c.passed = true;
  c.detail = std::move(why);
  return c;
}

double max_abs_derivative(const PeriodicGrid& grid, std::span<const double> eta) {
  const auto d = spectral_derivative(grid, eta);
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return m;
}

std::string at_time(double t) {
  std::ostringstream s;
  s.precision(17);
  s << "worst at t = " << t;
  return s.str();
}

}  // namespace

InvariantReport invariant_suite(const EvolutionRun& run) {
  InvariantReport rep;
  const auto& snaps = run.snapshots;
  const auto& times = run.times;
  const auto& diag = run.diagnostics;

  if (snaps.empty() || snaps.size() != times.size()) {
    rep.checks.push_back(make_check("run_shape", 0.0, std::numeric_limits<double>::infinity(),
                                    "snapshot and time counts differ or are empty"));
    return rep;
  }
  const PeriodicGrid grid(snaps.front().size());
  const std::size_t n_snap = snaps.size();

  {
    double worst = std::abs(times.front());
    for (std::size_t k = 1; k < n_snap; ++k) {
      if (!(times[k] > times[k - 1])) worst = std::max(worst, 1.0 + times[k - 1] - times[k]);
    }
    rep.checks.push_back(make_check("times_increasing", 0.0, worst));
  }

  std::vector<double> lip(n_snap), hmin(n_snap), hmax(n_snap), area(n_snap);
  bool finite = true;
  for (std::size_t k = 0; k < n_snap; ++k) {
    const auto& e = snaps[k];
    if (e.size() != grid.size() ||
        !std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); })) {
      finite = false;
      break;
    }
    lip[k] = max_abs_derivative(grid, e);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    hmin[k] = std::exp(*lo);
    hmax[k] = std::exp(*hi);
    area[k] = enclosed_area(grid, e);
  }
  rep.checks.push_back(make_check("snapshots_valid", 0.0, finite ? 0.0 : 1.0,
                                  finite ? "" : "non-finite sample or length mismatch"));
  if (!finite) return rep;

  // The recorded initial state is the reference when available, so a
  // corrupted first snapshot is caught as well.
  const double lip0 = diag.empty() ? lip[0] : std::min(lip[0], diag.front().stats.lipschitz_norm);
  const double r0 = diag.empty() ? hmin[0] : diag.front().stats.min_h;
  const double big_r0 = diag.empty() ? hmax[0] : diag.front().stats.max_h;

  {
    double worst = -std::numeric_limits<double>::infinity();
    double t_worst = 0.0;
    for (std::size_t k = 0; k < n_snap; ++k) {
      if (lip[k] - lip0 > worst) { worst = lip[k] - lip0; t_worst = times[k]; }
    }
    for (const auto& d : diag) worst = std::max(worst, d.stats.lipschitz_norm - lip0);
    rep.checks.push_back(make_check("lipschitz_bound", tolerance::lipschitz_bound, worst,
                                    at_time(t_worst)));
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    double t_worst = 0.0;
    std::size_t cursor = 0;
    for (std::size_t k = 1; k < n_snap; ++k) {
      std::size_t steps = 0;
      while (cursor < diag.size() && diag[cursor].t <= times[k - 1]) ++cursor;
      while (cursor < diag.size() && diag[cursor].t <= times[k]) { ++cursor; ++steps; }
      steps = std::max<std::size_t>(steps, 1);
      const double v = lip[k] - lip[k - 1] - tolerance::lipschitz_per_step * static_cast<double>(steps - 1);
      if (v > worst) { worst = v; t_worst = times[k]; }
    }
    for (std::size_t i = 1; i < diag.size(); ++i) {
      const double v = diag[i].stats.lipschitz_norm - diag[i - 1].stats.lipschitz_norm;
      if (v > worst) { worst = v; t_worst = diag[i].t; }
    }
    if (!std::isfinite(worst)) worst = 0.0;
    rep.checks.push_back(make_check("lipschitz_monotone", tolerance::lipschitz_per_step, worst,
                                    at_time(t_worst)));
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    double t_worst = 0.0;
    auto probe = [&](double t, double lo, double hi) {
      const double v = std::max(std::sqrt(r0 * r0 + 2.0 * t) - lo,
                                hi - std::sqrt(big_r0 * big_r0 + 2.0 * t));
      if (v > worst) { worst = v; t_worst = t; }
    };
    for (std::size_t k = 0; k < n_snap; ++k) probe(times[k], hmin[k], hmax[k]);
    for (const auto& d : diag) probe(d.t, d.stats.min_h, d.stats.max_h);
    rep.checks.push_back(make_check("linf_envelope", tolerance::envelope, worst, at_time(t_worst)));
  }

  if (diag.empty()) {
    rep.checks.push_back(not_applicable("taylor_sign", tolerance::taylor, "no per-step diagnostics"));
  } else {
    double worst = -std::numeric_limits<double>::infinity();
    double t_worst = 0.0;
    for (const auto& d : diag) {
      if (!(d.taylor_max <= worst)) { worst = d.taylor_max; t_worst = d.t; }
    }
    rep.checks.push_back(make_check("taylor_sign", tolerance::taylor, worst, at_time(t_worst)));
  }

  if (run.config.epsilon == 0.0) {
    double worst = 0.0;
    double t_worst = 0.0;
    for (std::size_t k = 0; k < n_snap; ++k) {
      const double v = std::abs(area[k] - area[0] - 2.0 * kPi * times[k]) / area[0];
      if (!(v <= worst)) { worst = v; t_worst = times[k]; }
    }
    rep.checks.push_back(make_check("area_law", tolerance::area_law, worst, at_time(t_worst)));
  } else {
    rep.checks.push_back(not_applicable("area_law", tolerance::area_law,
                                        "viscous runs do not conserve the injection rate exactly"));
  }

  for (const auto& [name, gamma] : {std::pair{"modulus_holder_half", 0.5},
                                    std::pair{"modulus_lipschitz", 1.0}}) {
    std::vector<double> semi(n_snap);
    parallel_for(n_snap, [&](std::size_t k) { semi[k] = holder_seminorm(grid, snaps[k], gamma); }, 4);
    double worst = -std::numeric_limits<double>::infinity();
    double t_worst = 0.0;
    for (std::size_t k = 1; k < n_snap; ++k) {
      if (semi[k] - semi[0] > worst) { worst = semi[k] - semi[0]; t_worst = times[k]; }
    }
    if (!std::isfinite(worst)) worst = 0.0;
    rep.checks.push_back(make_check(name, tolerance::modulus, worst, at_time(t_worst)));
  }

  if (times.back() >= tolerance::roundness_time && lip0 <= 0.5) {
    const double v = hmax.back() / hmin.back() - 1.0;
    rep.checks.push_back(make_check("asymptotic_roundness", tolerance::roundness, v,
                                    at_time(times.back())));
  } else {
    rep.checks.push_back(not_applicable("asymptotic_roundness", tolerance::roundness,
                                        "needs t_end >= 20 and initial slope <= 0.5"));
  }
  return rep;
}

InvariantCheck comparison_check(const EvolutionRun& lower, const EvolutionRun& upper) {
  const std::size_t n = std::min(lower.snapshots.size(), upper.snapshots.size());
  double worst = -std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (lower.snapshots[k].size() != upper.snapshots[k].size()) {
      throw InputShapeError("comparison: snapshot lengths differ");
    }
    if (std::abs(lower.times[k] - upper.times[k]) > 1e-12 * std::max(1.0, upper.times[k])) {
      throw InputError("comparison: runs were saved at different times");
    }
    for (std::size_t j = 0; j < lower.snapshots[k].size(); ++j) {
      const double v = lower.snapshots[k][j] - upper.snapshots[k][j];
      if (v > worst) { worst = v; t_worst = lower.times[k]; }
    }
  }
  return make_check("comparison", tolerance::comparison, worst, at_time(t_worst));
}

InvariantCheck scaling_check(const EvolutionRun& base, const EvolutionRun& scaled, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("scaling: lambda must be positive");
  const std::size_t n = std::min(base.snapshots.size(), scaled.snapshots.size());
  const double shift = std::log(lambda);
  double worst = 0.0;
  double t_worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(scaled.times[k] - lambda * lambda * base.times[k]) >
        1e-9 * std::max(1.0, scaled.times[k])) {
      throw InputError("scaling: snapshot times do not correspond under t -> lambda^2 t");
    }
    for (std::size_t j = 0; j < base.snapshots[k].size(); ++j) {
      const double v = std::abs(scaled.snapshots[k][j] - shift - base.snapshots[k][j]);
      if (v > worst) { worst = v; t_worst = base.times[k]; }
    }
  }
  return make_check("scaling", tolerance::scaling, worst, at_time(t_worst));
}

}  // namespace helios
