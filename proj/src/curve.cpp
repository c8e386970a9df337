#include "helios/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "helios/errors.hpp"

namespace helios {

BoundaryCurve BoundaryCurve::from_eta(const PeriodicGrid& grid, std::span<const double> eta) {
  detail::require_length(grid, eta.size(), "curve_from_eta");
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (!std::isfinite(eta[j])) {
      throw InputError("curve_from_eta: non-finite eta at node " + std::to_string(j));
    }
  }

  BoundaryCurve c(grid);
  const std::size_t n = grid.size();
  c.eta_.assign(eta.begin(), eta.end());
  c.deta_ = spectral_derivative(grid, eta, 1);
  c.d2eta_ = spectral_derivative(grid, eta, 2);
  c.h_.resize(n);
  c.z_.resize(n);
  c.dz_.resize(n);
  c.d2z_.resize(n);
  c.normal_.resize(n);

  const Complex i_unit(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = std::exp(eta[j]);
    const double e1 = c.deta_[j];
    const double e2 = c.d2eta_[j];
    const Complex er = std::polar(1.0, grid.node(j));
    // h' = hη', h'' = h(η'' + η'²)
    const double hp = h * e1;
    const double hpp = h * (e2 + e1 * e1);
    c.h_[j] = h;
    c.z_[j] = h * er;
    c.dz_[j] = Complex(hp, h) * er;
    c.d2z_[j] = Complex(hpp - h, 2.0 * hp) * er;
    c.normal_[j] = -i_unit * c.dz_[j];
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(std::abs(c.d2z_[j]))) {
      throw GeometryError("curve_from_eta: radius h must be positive and finite (node " +
                          std::to_string(j) + ")");
    }
  }
  return c;
}

double enclosed_area(const PeriodicGrid& grid, std::span<const double> eta) {
  detail::require_length(grid, eta.size(), "enclosed_area");
  double s = 0.0;
  for (double e : eta) s += std::exp(2.0 * e);
  return 0.5 * grid.spacing() * s;
}

CurveStats curve_stats(const BoundaryCurve& c) {
  CurveStats s{};
  s.lipschitz_norm = 0.0;
  for (double d : c.deta()) s.lipschitz_norm = std::max(s.lipschitz_norm, std::abs(d));
  const auto [lo, hi] = std::minmax_element(c.h().begin(), c.h().end());
  s.min_h = *lo;
  s.max_h = *hi;
  s.area = enclosed_area(c.grid(), c.eta());
  s.cone_half_angle = std::atan(s.lipschitz_norm);
  return s;
}

}  // namespace helios
