#include "helios/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <limits>
#include <numbers>
#include <string>

#include "helios/errors.hpp"

namespace helios {

namespace {

using Eigen::Index;

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> f) {
  return {f.data(), static_cast<Index>(f.size())};
}

}  // namespace

Samples solve_theta(const OperatorSet& ops, std::span<const double> g, double* residual_out) {
  const auto& grid = ops.curve().grid();
  detail::require_length(grid, g.size(), "solve_theta");
  const Index n = static_cast<Index>(grid.size());

  const Samples rhs = spectral_derivative(grid, g, 1);
  const auto b = as_vector(rhs);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (residual_out) *residual_out = 0.0;
    return Samples(grid.size(), 0.0);
  }

  // The stored kstar is the parametrized adjoint kernel, which is minus the
  // geometric K* of the jump relations. The density equation (½I - K*_geo)θ =
  // ∂_α g therefore reads (½I + kstar)θ = ∂_α g. Its null space (the
  // equilibrium density) is removed by the rank-one term 𝟙wᵀ/2π, which pins
  // the dα-mean of θ to zero.
  Eigen::MatrixXd a = ops.kstar();
  a.diagonal().array() += 0.5;
  a.array() += grid.spacing() / (2.0 * std::numbers::pi);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Samples theta(grid.size());
  Eigen::Map<Eigen::VectorXd> x(theta.data(), n);
  x = lu.solve(b);

  const double residual = (a * x - b).norm() / bnorm;
  if (residual_out) *residual_out = residual;
  if (!(residual <= kSolveResidualGate)) {
    throw LinearAlgebraError("solve_theta: relative residual " + std::to_string(residual) +
                                 " above gate",
                             residual);
  }
  return theta;
}

DtNResult apply_dtn(const OperatorSet& ops, std::span<const double> g) {
  const auto& c = ops.curve();
  const auto& grid = c.grid();
  DtNResult r;
  r.theta = solve_theta(ops, g, &r.solve_residual);

  const Samples ht = hilbert_transform(grid, r.theta);
  r.g_of.resize(grid.size());
  Eigen::Map<Eigen::VectorXd>(r.g_of.data(), static_cast<Index>(grid.size())) =
      ops.lambda_reg() * as_vector(r.theta) + 0.5 * as_vector(ht);

  r.mean_theta = mean(grid, r.theta);
  double num = 0.0, len = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double ds = std::abs(c.dz()[j]);
    num += r.theta[j] * ds;
    len += ds;
  }
  r.mean_theta_arclength = num / len;
  return r;
}

double taylor_sign_residual(const OperatorSet& ops) {
  const auto r = apply_dtn(ops, ops.curve().eta());
  double worst = -std::numeric_limits<double>::infinity();
  for (double v : r.g_of) worst = std::max(worst, v - 1.0);
  return worst;
}

namespace {

void check_modes(std::size_t n, int n_modes, const char* what) {
  if (n_modes < 0 || 2 * static_cast<std::size_t>(n_modes) >= n) {
    throw ParameterError(std::string(what) + ": n_modes must satisfy 0 <= n_modes < N/2");
  }
}

struct HarmonicFit {
  Eigen::VectorXd coeffs;  // a0, a1, b1, a2, b2, ...
  double misfit;
};

HarmonicFit least_squares(const Eigen::MatrixXd& basis, std::span<const double> g,
                          const char* what) {
  const auto rhs = as_vector(g);
  HarmonicFit fit;
  fit.coeffs = basis.colPivHouseholderQr().solve(rhs);
  fit.misfit = (basis * fit.coeffs - rhs).cwiseAbs().maxCoeff();
  if (!(fit.misfit < kOracleMisfitGate)) {
    std::ostringstream msg;
    msg << what << ": boundary misfit " << std::scientific << std::setprecision(2) << fit.misfit
        << " above gate";
    throw OracleInconclusive(msg.str(), fit.misfit);
  }
  return fit;
}

constexpr std::size_t kOversample = 4;

}  // namespace

OracleResult dtn_oracle_collocation(const BoundaryCurve& c, std::span<const double> g,
                                    int n_modes) {
  const auto& grid = c.grid();
  detail::require_length(grid, g.size(), "dtn_oracle_collocation");
  check_modes(grid.size(), n_modes, "dtn_oracle_collocation");
  const Index n = static_cast<Index>(grid.size());
  const Index cols = 1 + 2 * n_modes;

  // Fit on the oversampled boundary so the misfit also sees between the nodes.
  const PeriodicGrid fine(kOversample * grid.size());
  const Index nf = static_cast<Index>(fine.size());
  const Samples eta_f = resample(grid, c.eta(), fine);
  const Samples g_f = resample(grid, g, fine);

  // r^k scaled by the outer radius keeps the columns O(1).
  double rho = 0.0;
  for (double e : eta_f) rho = std::max(rho, std::exp(e));
  Eigen::MatrixXd basis(nf, cols);
  for (Index j = 0; j < nf; ++j) {
    const double s = std::exp(eta_f[j]) / rho;
    const double a = fine.node(j);
    basis(j, 0) = 1.0;
    double sk = 1.0;
    for (int k = 1; k <= n_modes; ++k) {
      sk *= s;
      basis(j, 2 * k - 1) = sk * std::cos(k * a);
      basis(j, 2 * k) = sk * std::sin(k * a);
    }
  }
  const auto fit = least_squares(basis, g_f, "dtn_oracle_collocation");

  // N_h·∇φ = h ∂_r φ - η' ∂_ϑ φ, and h ∂_r (h/ρ)^k = k (h/ρ)^k.
  OracleResult out{Samples(grid.size(), 0.0), fit.misfit};
  for (Index j = 0; j < n; ++j) {
    const double a = grid.node(j);
    const double s = c.h()[j] / rho;
    double radial_part = 0.0, angular_part = 0.0, sk = 1.0;
    for (int k = 1; k <= n_modes; ++k) {
      sk *= s;
      const double ak = fit.coeffs(2 * k - 1), bk = fit.coeffs(2 * k);
      const double ck = std::cos(k * a), sn = std::sin(k * a);
      radial_part += k * sk * (ak * ck + bk * sn);
      angular_part += k * sk * (-ak * sn + bk * ck);
    }
    out.g_of[j] = radial_part - c.deta()[j] * angular_part;
  }
  return out;
}

OracleResult graph_dtn_oracle(std::span<const double> eta, std::span<const double> g,
                              int n_modes) {
  if (eta.size() != g.size()) {
    throw InputShapeError("graph_dtn_oracle: eta and g lengths differ");
  }
  const PeriodicGrid grid(eta.size());
  check_modes(grid.size(), n_modes, "graph_dtn_oracle");
  const Index n = static_cast<Index>(grid.size());
  const double top = *std::max_element(eta.begin(), eta.end());
  const Samples slope = spectral_derivative(grid, eta, 1);

  const PeriodicGrid fine(kOversample * grid.size());
  const Index nf = static_cast<Index>(fine.size());
  const Samples eta_f = resample(grid, eta, fine);
  const Samples g_f = resample(grid, g, fine);

  Eigen::MatrixXd basis(nf, 1 + 2 * n_modes);
  for (Index j = 0; j < nf; ++j) {
    const double x = fine.node(j);
    basis(j, 0) = 1.0;
    for (int k = 1; k <= n_modes; ++k) {
      const double decay = std::exp(k * (eta_f[j] - top));
      basis(j, 2 * k - 1) = decay * std::cos(k * x);
      basis(j, 2 * k) = decay * std::sin(k * x);
    }
  }
  const auto fit = least_squares(basis, g_f, "graph_dtn_oracle");

  // N_g·∇φ = ∂_y φ - η' ∂_x φ on y = η(x).
  OracleResult out{Samples(grid.size(), 0.0), fit.misfit};
  for (Index j = 0; j < n; ++j) {
    const double x = grid.node(j);
    double dy = 0.0, dx = 0.0;
    for (int k = 1; k <= n_modes; ++k) {
      const double decay = std::exp(k * (eta[j] - top));
      const double ak = fit.coeffs(2 * k - 1), bk = fit.coeffs(2 * k);
      dy += k * decay * (ak * std::cos(k * x) + bk * std::sin(k * x));
      dx += k * decay * (-ak * std::sin(k * x) + bk * std::cos(k * x));
    }
    out.g_of[j] = dy - slope[j] * dx;
  }
  return out;
}

}  // namespace helios
