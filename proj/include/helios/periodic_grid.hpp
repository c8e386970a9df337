#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace helios {

using Samples = std::vector<double>;

/// Uniform grid on the circle [0, 2π) with trapezoidal weights.
///
/// The node count is even and at least 8 so the Nyquist mode is well defined.
/// Grid functions are plain sample vectors; Fourier coefficients only exist
/// transiently inside the spectral operations below.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n_points);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  double node(std::size_t j) const noexcept { return nodes_[j]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Samples a callable at the nodes.
  template <typename F>
  Samples sample(F&& f) const {
    Samples out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = f(nodes_[j]);
    return out;
  }

  /// Signed wavenumber of DFT bin j, in (-N/2, N/2].
  long wavenumber(std::size_t j) const noexcept {
    return j <= n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
  }

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) noexcept {
    return a.n_ == b.n_;
  }

 private:
  std::size_t n_;
  double spacing_;
  Samples nodes_;
  Samples weights_;
};

/// order-th derivative of the trigonometric interpolant, sampled at the nodes.
/// Odd orders drop the Nyquist mode.
Samples spectral_derivative(const PeriodicGrid& grid, std::span<const double> f,
                            int order = 1);

/// Periodic Hilbert transform with multiplier -i·sgn(k); the mean and the
/// Nyquist mode map to zero.
Samples hilbert_transform(const PeriodicGrid& grid, std::span<const double> f);

/// Σ w_j f_j.
double trapezoid_integral(const PeriodicGrid& grid, std::span<const double> f);

/// Quadrature mean (1/2π)∫f.
double mean(const PeriodicGrid& grid, std::span<const double> f);

/// Periodic convolution with the heat kernel of time eps. The discrete kernel
/// is the periodic heat kernel sampled on the grid and normalized to unit mass,
/// so it stays positive for every eps (its DFT is the aliased sum of
/// e^{-k² eps}). Preserves the mean; never increases the max of the discrete
/// derivative of band-limited data.
Samples mollify(const PeriodicGrid& grid, std::span<const double> f, double eps);

/// Spectral resampling onto a grid of a different size (zero padding or
/// truncation). The Nyquist mode of the source is split symmetrically.
Samples resample(const PeriodicGrid& from, std::span<const double> f,
                 const PeriodicGrid& to);

/// Evaluates the trigonometric interpolant of a sample vector anywhere on the
/// circle. Coefficients are computed once at construction.
class TrigInterpolant {
 public:
  TrigInterpolant(const PeriodicGrid& grid, std::span<const double> f);

  double operator()(double alpha) const;
  double derivative(double alpha) const;

 private:
  std::size_t n_;
  double mean_;
  std::vector<std::complex<double>> coeffs_;  // k = 1 .. N/2 (Nyquist halved)
};

namespace detail {
// Full complex DFT of real samples (unnormalized forward transform).
std::vector<std::complex<double>> forward_dft(std::span<const double> f);
// Inverse DFT returning the real part, scaled by 1/N.
Samples inverse_dft_real(std::vector<std::complex<double>>& spectrum);
void require_length(const PeriodicGrid& grid, std::size_t len, const char* what);
}  // namespace detail

}  // namespace helios
