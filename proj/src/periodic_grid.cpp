#include "helios/periodic_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "helios/errors.hpp"

namespace helios {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::FFT<double>& fft_engine() {
  // Plans are cached per object and are not shareable across threads.
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

namespace detail {

void require_length(const PeriodicGrid& grid, std::size_t len, const char* what) {
  if (len != grid.size()) {
    throw InputShapeError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                          " samples, got " + std::to_string(len));
  }
}

std::vector<std::complex<double>> forward_dft(std::span<const double> f) {
  std::vector<double> in(f.begin(), f.end());
  std::vector<std::complex<double>> out;
  fft_engine().fwd(out, in);
  return out;
}

Samples inverse_dft_real(std::vector<std::complex<double>>& spectrum) {
  std::vector<std::complex<double>> out;
  fft_engine().inv(out, spectrum);
  Samples real(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) real[j] = out[j].real();
  return real;
}

}  // namespace detail

PeriodicGrid::PeriodicGrid(std::size_t n_points) : n_(n_points) {
  if (n_ < 8 || n_ % 2 != 0) {
    throw ParameterError("PeriodicGrid: n_points must be even and >= 8, got " +
                         std::to_string(n_));
  }
  spacing_ = kTwoPi / static_cast<double>(n_);
  nodes_.resize(n_);
  weights_.assign(n_, spacing_);
  for (std::size_t j = 0; j < n_; ++j) nodes_[j] = spacing_ * static_cast<double>(j);
}

Samples spectral_derivative(const PeriodicGrid& grid, std::span<const double> f, int order) {
  detail::require_length(grid, f.size(), "spectral_derivative");
  if (order < 1) throw ParameterError("spectral_derivative: order must be positive");
  auto spec = detail::forward_dft(f);
  const std::size_t n = grid.size();
  const std::complex<double> i_unit(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const long k = grid.wavenumber(j);
    if (j == n / 2 && order % 2 == 1) {
      spec[j] = 0.0;
      continue;
    }
    spec[j] *= std::pow(i_unit * static_cast<double>(k), order);
  }
  return detail::inverse_dft_real(spec);
}

Samples hilbert_transform(const PeriodicGrid& grid, std::span<const double> f) {
  detail::require_length(grid, f.size(), "hilbert_transform");
  auto spec = detail::forward_dft(f);
  const std::size_t n = grid.size();
  spec[0] = 0.0;
  spec[n / 2] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (j == n / 2) continue;
    const double sgn = grid.wavenumber(j) > 0 ? 1.0 : -1.0;
    spec[j] *= std::complex<double>(0.0, -sgn);
  }
  return detail::inverse_dft_real(spec);
}

double trapezoid_integral(const PeriodicGrid& grid, std::span<const double> f) {
  detail::require_length(grid, f.size(), "trapezoid_integral");
  double sum = 0.0;
  const auto w = grid.weights();
  for (std::size_t j = 0; j < f.size(); ++j) sum += w[j] * f[j];
  return sum;
}

double mean(const PeriodicGrid& grid, std::span<const double> f) {
  return trapezoid_integral(grid, f) / kTwoPi;
}

namespace {

// Σ_{q ≡ k (mod N)} e^{-q² eps}, divided by the same sum at k = 0. Uses the
// direct sum for wide kernels and the Poisson-dual sum for narrow ones; both
// converge in a handful of terms in their regime.
std::vector<double> heat_multipliers(std::size_t n, double eps) {
  const double nn = static_cast<double>(n);
  std::vector<double> m(n / 2 + 1);
  if (eps * nn * nn >= 1.0) {
    auto aliased = [&](double k) {
      double s = 0.0;
      for (long l = 0;; ++l) {
        const double a = std::exp(-(k + l * nn) * (k + l * nn) * eps);
        const double b = l > 0 ? std::exp(-(k - l * nn) * (k - l * nn) * eps) : 0.0;
        s += a + b;
        if (l > 0 && a + b < 1e-300) break;
      }
      return s;
    };
    const double norm = aliased(0.0);
    for (std::size_t k = 0; k <= n / 2; ++k) m[k] = aliased(static_cast<double>(k)) / norm;
  } else {
    const double decay = std::numbers::pi * std::numbers::pi / (eps * nn * nn);
    std::vector<double> terms;
    for (long q = 1;; ++q) {
      const double t = std::exp(-decay * static_cast<double>(q * q));
      if (t < 1e-300) break;
      terms.push_back(t);
    }
    double norm = 1.0;
    for (double t : terms) norm += 2.0 * t;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      double s = 1.0;
      for (std::size_t q = 0; q < terms.size(); ++q) {
        s += 2.0 * terms[q] *
             std::cos(kTwoPi * static_cast<double>((q + 1) * k) / nn);
      }
      m[k] = s / norm;
    }
  }
  return m;
}

}  // namespace

Samples mollify(const PeriodicGrid& grid, std::span<const double> f, double eps) {
  detail::require_length(grid, f.size(), "mollify");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ParameterError("mollify: eps must be positive and finite");
  }
  const auto mult = heat_multipliers(grid.size(), eps);
  auto spec = detail::forward_dft(f);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    spec[j] *= mult[static_cast<std::size_t>(std::labs(grid.wavenumber(j)))];
  }
  return detail::inverse_dft_real(spec);
}

Samples resample(const PeriodicGrid& from, std::span<const double> f, const PeriodicGrid& to) {
  detail::require_length(from, f.size(), "resample");
  const std::size_t n = from.size();
  const std::size_t m = to.size();
  if (n == m) return Samples(f.begin(), f.end());
  auto src = detail::forward_dft(f);
  std::vector<std::complex<double>> dst(m, 0.0);
  const double scale = static_cast<double>(m) / static_cast<double>(n);
  const long half_src = static_cast<long>(n / 2);
  const long half_dst = static_cast<long>(m / 2);
  auto bin = [](long k, std::size_t len) {
    return static_cast<std::size_t>((k + static_cast<long>(len)) % static_cast<long>(len));
  };
  const long kmax = std::min(half_src, half_dst);
  for (long k = -kmax + 1; k < kmax; ++k) dst[bin(k, m)] = src[bin(k, n)] * scale;
  if (m > n) {
    const auto nyq = src[static_cast<std::size_t>(half_src)] * (0.5 * scale);
    dst[bin(half_src, m)] = nyq;
    dst[bin(-half_src, m)] = nyq;
  } else {
    dst[static_cast<std::size_t>(half_dst)] =
        (src[bin(half_dst, n)] + src[bin(-half_dst, n)]).real() * scale;
  }
  return detail::inverse_dft_real(dst);
}

TrigInterpolant::TrigInterpolant(const PeriodicGrid& grid, std::span<const double> f)
    : n_(grid.size()) {
  detail::require_length(grid, f.size(), "TrigInterpolant");
  const auto spec = detail::forward_dft(f);
  const double inv_n = 1.0 / static_cast<double>(n_);
  mean_ = spec[0].real() * inv_n;
  coeffs_.resize(n_ / 2);
  for (std::size_t k = 1; k < n_ / 2; ++k) coeffs_[k - 1] = 2.0 * spec[k] * inv_n;
  coeffs_[n_ / 2 - 1] = spec[n_ / 2].real() * inv_n;
}

double TrigInterpolant::operator()(double alpha) const {
  double s = mean_;
  const std::complex<double> step = std::polar(1.0, alpha);
  std::complex<double> phase = step;
  for (const auto& c : coeffs_) {
    s += (c * phase).real();
    phase *= step;
  }
  return s;
}

double TrigInterpolant::derivative(double alpha) const {
  double s = 0.0;
  const std::complex<double> step = std::polar(1.0, alpha);
  std::complex<double> phase = step;
  double k = 1.0;
  for (const auto& c : coeffs_) {
    s += (std::complex<double>(0.0, k) * c * phase).real();
    phase *= step;
    k += 1.0;
  }
  return s;
}

}  // namespace helios
