#include "helios/layer_kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "helios/errors.hpp"
#include "helios/parallel.hpp"

namespace helios {

namespace detail {

std::vector<double> cot_table(std::size_t n) {
  std::vector<double> t(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    t[d] = 1.0 / std::tan(std::numbers::pi * static_cast<double>(d) / static_cast<double>(n));
  }
  return t;
}

}  // namespace detail

OperatorSet OperatorSet::assemble(const BoundaryCurve& c) {
  const std::size_t n = c.size();
  OperatorSet ops(c);
  ops.kstar_.resize(n, n);
  ops.kdl_.resize(n, n);
  ops.lambda_reg_.resize(n, n);

  const auto z = c.z();
  const auto dz = c.dz();
  const auto d2z = c.d2z();
  const double w = c.grid().spacing();
  const double inv2pi = 0.5 / std::numbers::pi;
  const double inv4pi = 0.25 / std::numbers::pi;
  const auto cot = detail::cot_table(n);

  double scale = 0.0;
  for (const auto& zj : z) scale = std::max(scale, std::abs(zj));
  const double degenerate = 1e-14 * scale;

  // Rows are independent; a degenerate pair is reported after the loop.
  std::vector<long> bad_row(n, -1);
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) {
        const Complex curv = d2z[j] / dz[j];
        ops.kstar_(j, j) = -w * inv4pi * curv.imag();
        ops.kdl_(j, j) = -w * inv4pi * curv.imag();
        ops.lambda_reg_(j, j) = w * inv4pi * curv.real();
        continue;
      }
      const Complex dzeta = z[j] - z[m];
      if (std::abs(dzeta) < degenerate) {
        bad_row[j] = static_cast<long>(m);
        continue;
      }
      const Complex q_here = dz[j] / dzeta;
      const Complex q_there = dz[m] / dzeta;
      const std::size_t d = (j + n - m) % n;
      ops.kstar_(j, m) = -w * inv2pi * q_here.imag();
      ops.kdl_(j, m) = w * inv2pi * q_there.imag();
      ops.lambda_reg_(j, m) = w * (inv2pi * q_here.real() - inv4pi * cot[d]);
    }
  }, 16);

  for (std::size_t j = 0; j < n; ++j) {
    if (bad_row[j] >= 0) {
      throw GeometryError("assemble: boundary points " + std::to_string(j) + " and " +
                          std::to_string(bad_row[j]) + " coincide (degenerate curve)");
    }
  }
  return ops;
}

namespace {

Samples matvec(const Eigen::MatrixXd& a, std::span<const double> f, const char* what) {
  if (static_cast<std::size_t>(a.cols()) != f.size()) {
    throw InputShapeError(std::string(what) + ": expected " + std::to_string(a.cols()) +
                          " samples, got " + std::to_string(f.size()));
  }
  Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(f.size()));
  Samples out(f.size());
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = a * x;
  return out;
}

}  // namespace

Samples apply_kstar(const OperatorSet& ops, std::span<const double> f) {
  return matvec(ops.kstar(), f, "apply_kstar");
}

Samples apply_kdl(const OperatorSet& ops, std::span<const double> f) {
  return matvec(ops.kdl(), f, "apply_kdl");
}

}  // namespace helios
