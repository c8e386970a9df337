#pragma once

#include "helios/layer_kernels.hpp"

namespace helios {

struct DtNResult {
  Samples theta;          // density solving (½I + kstar)θ = ∂_α g
  Samples g_of;           // G(h)g at the nodes
  double solve_residual;  // relative ℓ² residual of the dense solve
  double mean_theta;      // quadrature mean of θ in dα (should vanish)
  double mean_theta_arclength;  // diagnostic: θ mean in arc-length measure
};

/// Relative residual above which a density solve is rejected.
inline constexpr double kSolveResidualGate = 1e-10;

/// θ = (½I + kstar)⁻¹ ∂_α g, solved densely with the rank-one term 𝟙wᵀ/2π
/// added to pin the dα-mean of θ to zero. The stored kstar is the negative of
/// the geometric adjoint double layer, so this is ½I - K* in geometric terms. Throws LinearAlgebraError when the
/// relative residual of the pinned system exceeds kSolveResidualGate.
Samples solve_theta(const OperatorSet& ops, std::span<const double> g,
                    double* residual_out = nullptr);

/// Star-shaped Dirichlet-to-Neumann map: G(h)g = Λ_reg θ + ½Hθ.
DtNResult apply_dtn(const OperatorSet& ops, std::span<const double> g);

/// max_j (G(h)η - 1)_j for η of the operator's own curve. Non-positive for
/// every star-shaped curve, up to discretization error.
double taylor_sign_residual(const OperatorSet& ops);

/// Misfit gate for the least-squares oracles.
inline constexpr double kOracleMisfitGate = 1e-9;

struct OracleResult {
  Samples g_of;
  double misfit;  // max boundary misfit of the harmonic fit
};

/// Independent DtN oracle: least-squares fit of g by the interior harmonic
/// basis 1, r^k cos kϑ, r^k sin kϑ (k ≤ n_modes) on a 4x oversampled boundary
/// (η and g interpolated spectrally), then N_h·∇φ evaluated analytically. Throws OracleInconclusive when the fit
/// misfit exceeds kOracleMisfitGate.
OracleResult dtn_oracle_collocation(const BoundaryCurve& c, std::span<const double> g,
                                    int n_modes);

/// Graph-domain DtN oracle on {y < η(x)}: fits
/// a₀ + Σ e^{k(y - max η)}(a_k cos kx + b_k sin kx) to g on y = η(x) and
/// returns (-∂_x η, 1)·∇φ. Same misfit gate as above.
OracleResult graph_dtn_oracle(std::span<const double> eta, std::span<const double> g,
                              int n_modes);

}  // namespace helios
