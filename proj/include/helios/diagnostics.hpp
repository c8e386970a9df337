#pragma once

#include <string>
#include <vector>

#include "helios/evolution.hpp"

namespace helios {

// ---------------------------------------------------------------------------
// Harmonic extension and pressure
// ---------------------------------------------------------------------------

/// Harmonic extension of boundary data f into the star-shaped domain.
///
/// The double-layer density solves (½I - K)μ = f with the parametrized K, so
/// that the interior potential D μ(w) = (1/2π) Im ∫ μ z'/(z - w) dβ has
/// boundary trace f and D[1] ≡ 1 inside. D μ is the real part of the Cauchy
/// integral F of μ; its boundary values F = f + iψ are formed once (ψ from the
/// Plemelj limit, cotangent part applied spectrally) and F is then evaluated
/// with the barycentric Cauchy formula, which stays accurate arbitrarily close
/// to the boundary. Keeps a reference to ops.curve(); ops must outlive it.
class HarmonicExtension {
 public:
  HarmonicExtension(const OperatorSet& ops, std::span<const double> f);

  /// φ(w) for w inside the domain (or on a node).
  double operator()(Complex w) const { return analytic(w).real(); }
  /// F(w) with Re F = φ.
  Complex analytic(Complex w) const;
  /// Plain trapezoidal double-layer quadrature of the density (no near-field
  /// correction); used for calibration and far-field cross-checks.
  double double_layer(Complex w) const;

  std::span<const double> density() const noexcept { return mu_; }
  std::span<const double> conjugate_trace() const noexcept { return psi_; }
  double solve_residual() const noexcept { return residual_; }

 private:
  const BoundaryCurve* curve_;
  Samples mu_;
  Samples psi_;
  ComplexSamples boundary_values_;
  ComplexSamples cauchy_weights_;  // w_m z'_m
  double residual_ = 0.0;
};

/// D[1](w) by plain quadrature; equals 1 for every interior w under the
/// calibrated convention.
double unit_density_potential(const BoundaryCurve& c, Complex w);

struct PressureField {
  std::size_t n_r = 0;
  std::size_t n_theta = 0;
  double r_min = 0.0;
  // Row-major over (ring i, angle k), index i * n_theta + k.
  std::vector<double> r, theta, phi, p;
  double boundary_misfit = 0.0;  // max |φ - f| at boundary midpoints
  double max_boundary_pressure = 0.0;
  bool accuracy_warning = false;  // boundary_misfit above kPressureMisfitWarning
};

inline constexpr double kPressureMisfitWarning = 1e-5;

/// p = max(φ - log r, 0) with φ the harmonic extension of η, on a polar grid
/// whose rings run from r_min to 0.995·h(ϑ). Throws ConventionError if the
/// unit-density calibration on the unit disk fails and ParameterError unless
/// 0 < r_min < min h / 4.
PressureField reconstruct_pressure(const BoundaryCurve& c, std::size_t n_r,
                                   std::size_t n_theta, double r_min);

// ---------------------------------------------------------------------------
// Corner experiment
// ---------------------------------------------------------------------------

enum class CornerKind { acute, obtuse };

struct CornerSetup {
  std::size_t n_points = 256;
  double base_radius = 0.25;
  double kink_width = 0.3;     // decay length of the kink away from the tip
  double mollify_eps = 2e-4;   // heat-kernel time of the initial smoothing
  double cfl_safety = 0.5;
};

struct CornerReport {
  std::string classification;  // "moved" or "waiting"
  double opening_angle = 0.0;
  double slope = 0.0;                     // |∂_α η| on either side of the tip
  double mollification_amplitude = 0.0;  // |h_mollified - h_raw| at the tip
  double threshold = 0.0;                // 10 × amplitude
  double h_initial = 0.0;                // tip radius after mollification
  double h_final = 0.0;
  std::vector<double> times;
  std::vector<double> tip_radius;
};

/// Raw (unmollified) η of a tip at α = 0 whose fluid wedge has the given
/// opening angle: η = log R - s·w·(1 - e^{-d(α)/w}), s = cot(angle/2).
Samples corner_profile(const PeriodicGrid& grid, double opening_angle, const CornerSetup& setup);

/// Evolves the mollified corner and tracks the tip radius h(0, t). The tip
/// "moved" if it advanced by more than 10× the mollification amplitude.
CornerReport corner_experiment(CornerKind kind, double opening_angle, double duration,
                               const CornerSetup& setup = {});

/// Same tracking for arbitrary raw initial data and a given node.
CornerReport track_tip(std::span<const double> eta_raw, std::size_t node, double duration,
                       const CornerSetup& setup);

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

struct SymmetryDefects {
  double rotation = 0.0;   // kernels of the curve rotated by `shift` nodes vs permuted kernels
  double scaling = 0.0;    // kernels of η + ln λ vs kernels of η
  double dtn_adjoint = 0.0;  // |<f, G g> - <G f, g>| / (‖f‖‖G g‖ + ‖G f‖‖g‖), dα pairing
  double dtn_flux = 0.0;     // |∫ G g dα| / ‖G g‖_{L¹}
};

inline constexpr double kRotationTolerance = 1e-12;
inline constexpr double kScalingTolerance = 1e-13;
inline constexpr double kAdjointTolerance = 1e-10;
inline constexpr double kFluxTolerance = 1e-10;

SymmetryDefects symmetry_defects(const BoundaryCurve& c, std::size_t shift, double lambda);

// ---------------------------------------------------------------------------
// Invariant suite
// ---------------------------------------------------------------------------

struct InvariantCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double margin = 0.0;  // tolerance minus worst violation; negative on failure
  double tolerance = 0.0;
  std::string detail;
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;
  bool all_passed() const;
};

namespace tolerance {
inline constexpr double lipschitz_bound = 1e-6;
inline constexpr double lipschitz_per_step = 1e-8;
inline constexpr double envelope = 1e-6;
inline constexpr double taylor = 1e-8;
inline constexpr double area_law = 1e-6;
inline constexpr double modulus = 1e-6;
inline constexpr double roundness = 0.01;
inline constexpr double roundness_time = 20.0;
inline constexpr double comparison = 1e-8;
inline constexpr double scaling = 1e-6;
}  // namespace tolerance

/// Evaluates every single-run invariant on the stored snapshots and per-step
/// diagnostics. Pure: the same run always yields the same report.
InvariantReport invariant_suite(const EvolutionRun& run);

/// η_lo(·,t) ≤ η_hi(·,t) + tol at every common snapshot.
InvariantCheck comparison_check(const EvolutionRun& lower, const EvolutionRun& upper);

/// Trajectory scaling: the run started from η₀ + ln λ over λ²t_end must equal
/// the base run shifted by ln λ at corresponding snapshots.
InvariantCheck scaling_check(const EvolutionRun& base, const EvolutionRun& scaled, double lambda);

/// Discrete C^γ seminorm max_{i≠j} |η_i - η_j| / d(α_i, α_j)^γ over node pairs.
double holder_seminorm(const PeriodicGrid& grid, std::span<const double> eta, double gamma);

}  // namespace helios
