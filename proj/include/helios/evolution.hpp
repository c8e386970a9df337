#pragma once

#include <optional>
#include <vector>

#include "helios/dtn.hpp"

namespace helios {

/// Parameters of one run of the regularized interface equation
///   ∂_t η + e^{-2η}(G(h)η - 1) - ε ∂²_α η = 0.
struct EvolutionConfig {
  double epsilon = 0.0;
  std::optional<double> dt;  // empty means the adaptive rule
  double t_end = 1.0;
  std::size_t n_points = 128;
  std::size_t save_every = 1;
  double cfl_safety = 0.5;

  void validate() const;
};

struct StepDiagnostics {
  double t;
  CurveStats stats;
  double taylor_max;  // max_j (G(h)η - 1)_j at this state
};

struct EvolutionRun {
  EvolutionConfig config;
  std::vector<double> times;      // snapshot times, times[0] = 0
  std::vector<Samples> snapshots;  // η at each snapshot time
  std::vector<StepDiagnostics> diagnostics;  // every step, initial and final state included
};

/// Right-hand side of the unregularized equation: -e^{-2η}(G(h)η - 1).
Samples rhs(const BoundaryCurve& c);

/// One IMEX step: explicit midpoint for the nonlocal term, then the implicit
/// diffusion multiplier (1 + ε dt k²)⁻¹. Throws BlowUpError when the new
/// interface is non-finite or |η| exceeds kBlowUpBound.
BoundaryCurve step(const BoundaryCurve& c, double dt, double epsilon);

inline constexpr double kBlowUpBound = 50.0;

/// Adaptive step: cfl_safety · Δα · e^{2 min η} / (1 + max|G(h)η - 1|).
double auto_time_step(const BoundaryCurve& c, std::span<const double> g_of, double cfl_safety);

/// Integrates from eta0 to config.t_end. With a fixed dt the step is shrunk
/// uniformly so that an integer number of steps lands exactly on t_end.
EvolutionRun simulate(const EvolutionConfig& config, std::span<const double> eta0);

struct SweepReport {
  std::vector<double> eps_levels;
  std::vector<Samples> final_eta;  // η(·, t_end) per level
  std::vector<double> l2_gaps;     // ‖η_k - η_{k+1}‖_{L²} for consecutive levels
  std::vector<double> lipschitz_final;
  double lipschitz_initial;        // of the unmollified eta0
};

/// Vanishing-viscosity sweep: level k runs with ε_k from the mollified data
/// Γ_{ε_k} * η₀ and the gaps between consecutive final states are reported.
SweepReport vanishing_viscosity_sweep(const EvolutionConfig& config,
                                      std::span<const double> eta0,
                                      std::span<const double> eps_levels);

/// L²(𝕋) norm of a - b on the grid.
double l2_distance(const PeriodicGrid& grid, std::span<const double> a,
                   std::span<const double> b);

}  // namespace helios
