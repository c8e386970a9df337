#pragma once

#include <Eigen/Dense>

#include "helios/curve.hpp"

namespace helios {

/// Nyström matrices of the boundary operators on one star-shaped curve.
///
/// Quadrature weights are folded into every matrix, so applying an operator is
/// a plain matrix-vector product. Kernels use the complex form
///   K*(α,β)    = -(1/2π) Im[ z'(α) / (z(α) - z(β)) ]
///   K(α,β)     =  (1/2π) Im[ z'(β) / (z(α) - z(β)) ]
///   Λ_reg(α,β) =  (1/2π) Re[ z'(α) / (z(α) - z(β)) ] - (1/4π) cot((α-β)/2)
/// with diagonals taken from z(α)-z(β) = z'δ - ½z''δ² + O(δ³):
///   K* → -(1/4π) Im(z''/z'),  K → -(1/4π) Im(z''/z'),  Λ_reg → (1/4π) Re(z''/z').
/// The cotangent part of Λ is never stored; it equals ½H (Hilbert transform)
/// and is applied spectrally by the DtN solver.
///
/// On the unit circle every K* and K entry is -(1/4π)(2π/N) and Λ_reg is zero.
/// With these parametrized signs K·1 = -½ on any smooth curve.
class OperatorSet {
 public:
  static OperatorSet assemble(const BoundaryCurve& c);

  const BoundaryCurve& curve() const noexcept { return curve_; }
  const Eigen::MatrixXd& kstar() const noexcept { return kstar_; }
  const Eigen::MatrixXd& kdl() const noexcept { return kdl_; }
  const Eigen::MatrixXd& lambda_reg() const noexcept { return lambda_reg_; }

 private:
  explicit OperatorSet(const BoundaryCurve& c) : curve_(c) {}

  BoundaryCurve curve_;
  Eigen::MatrixXd kstar_;
  Eigen::MatrixXd kdl_;
  Eigen::MatrixXd lambda_reg_;
};

inline OperatorSet assemble(const BoundaryCurve& c) { return OperatorSet::assemble(c); }

/// K* f as a matrix-vector product.
Samples apply_kstar(const OperatorSet& ops, std::span<const double> f);

/// K f as a matrix-vector product.
Samples apply_kdl(const OperatorSet& ops, std::span<const double> f);

namespace detail {
// cot(π d / N) for d = 0..N-1 (entry 0 unused).
std::vector<double> cot_table(std::size_t n);
}  // namespace detail

}  // namespace helios
