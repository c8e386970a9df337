#pragma once

#include <complex>
#include <span>
#include <vector>

#include "helios/periodic_grid.hpp"

namespace helios {

using Complex = std::complex<double>;
using ComplexSamples = std::vector<Complex>;

/// Star-shaped boundary r = h(α) = e^{η(α)} around the origin together with
/// the parametrization z(α) = h(α)e^{iα} and its first two derivatives.
///
/// Derivatives come from spectral differentiation of η, so data with corners
/// must be mollified first; the construction accepts it but accuracy degrades.
/// Star-shapedness is structural (h > 0 always), so the only rejected inputs
/// are non-finite samples.
class BoundaryCurve {
 public:
  static BoundaryCurve from_eta(const PeriodicGrid& grid, std::span<const double> eta);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }

  std::span<const double> eta() const noexcept { return eta_; }
  std::span<const double> deta() const noexcept { return deta_; }
  std::span<const double> d2eta() const noexcept { return d2eta_; }
  std::span<const double> h() const noexcept { return h_; }
  std::span<const Complex> z() const noexcept { return z_; }
  std::span<const Complex> dz() const noexcept { return dz_; }
  std::span<const Complex> d2z() const noexcept { return d2z_; }
  // Unnormalized outward normal N = -i z'; N·e_r = h.
  std::span<const Complex> normal() const noexcept { return normal_; }

 private:
  explicit BoundaryCurve(const PeriodicGrid& grid) : grid_(grid) {}

  PeriodicGrid grid_;
  Samples eta_, deta_, d2eta_, h_;
  ComplexSamples z_, dz_, d2z_, normal_;
};

inline BoundaryCurve curve_from_eta(const PeriodicGrid& grid, std::span<const double> eta) {
  return BoundaryCurve::from_eta(grid, eta);
}

struct CurveStats {
  double lipschitz_norm;   // max_j |∂_α η|
  double min_h;
  double max_h;
  double area;             // ½∫h² dα
  double cone_half_angle;  // arctan(lipschitz_norm)
};

CurveStats curve_stats(const BoundaryCurve& c);

/// ½∫e^{2η}dα on the grid.
double enclosed_area(const PeriodicGrid& grid, std::span<const double> eta);

}  // namespace helios
