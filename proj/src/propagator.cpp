#include "mzk/propagator.hpp"

#include <cmath>
#include <string>

#include "mzk/errors.hpp"
#include "mzk/fft.hpp"
#include "mzk/spectral.hpp"

namespace mzk {

ComplexArray group_multiplier(const SpectralGrid& grid, double t) {
  ComplexArray m(grid.n_x(), grid.n_y_half());
  const auto& kx = grid.wavenumbers_x();
  const auto& ky = grid.wavenumbers_y();
  for (int i = 0; i < grid.n_x(); ++i) {
    const double xi = grid.is_nyquist_x(i) ? 0.0 : kx[i];
    for (int j = 0; j < grid.n_y_half(); ++j) m(i, j) = std::polar(1.0, t * dispersion(xi, ky[j]));
  }
  return m;
}

Field2D apply_group(const Field2D& f, double t) {
  if (t == 0.0) return f;
  ComplexArray s = f.spectral() * group_multiplier(f.grid(), t);
  return Field2D::from_spectrum(f.grid(), std::move(s));
}

double smooth_cutoff(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double g = std::exp(-1.0 / x);
  const double h = std::exp(-1.0 / (1.0 - x));
  return g / (g + h);
}

CutoffFamily make_cutoffs(int k, const SpectralGrid& grid, double a, double b) {
  CutoffFamily c;
  c.k = k;
  c.a = a;
  c.b = b;
  c.psi1 = grid.wavenumbers_x().unaryExpr([a](double xi) { return smooth_cutoff(a - std::abs(xi)); });
  c.psi2 = grid.wavenumbers_y().unaryExpr([b](double eta) { return smooth_cutoff(b - std::abs(eta)); });
  return c;
}

RealArray dyadic_partition(int k, const SpectralGrid& grid) {
  if (k < 0) throw DomainError("dyadic level must be >= 0");
  const auto& kx = grid.wavenumbers_x();
  const auto& ky = grid.wavenumbers_y();
  RealArray psi(grid.n_x(), grid.n_y());
  const double outer = std::ldexp(1.0, k + 1);
  const double inner = std::ldexp(1.0, k);
  for (int i = 0; i < grid.n_x(); ++i) {
    const double ax = std::abs(kx[i]);
    for (int j = 0; j < grid.n_y(); ++j) {
      const double ay = std::abs(ky[j]);
      if (k == 0) {
        psi(i, j) = smooth_cutoff(2.0 - ax) * smooth_cutoff(2.0 - ay);
      } else {
        const double box = smooth_cutoff(outer - ax);
        psi(i, j) = box * smooth_cutoff(outer - ay) * smooth_cutoff(ay - inner + 1.0) +
                    box * smooth_cutoff(ax - inner + 1.0) * smooth_cutoff(inner - ay);
      }
    }
  }
  return psi;
}

void require_kernel_resolution(int k, const SpectralGrid& grid, double a, double b) {
  if (k < 0) throw DomainError("dyadic level must be >= 0");
  const double top = std::ldexp(1.0, k + 1);
  if (!(a > 0.0 && a <= top && b > 0.0 && b <= top))
    throw DomainError("cutoff radii must satisfy 0 < a, b <= 2^(k+1)");
  if (grid.dkx() > 0.125 || grid.dky() > 0.125)
    throw ResolutionError("kernel needs >= 8 samples per unit wavenumber; spacing is " +
                          std::to_string(std::max(grid.dkx(), grid.dky())));
  if (grid.kx_max() < a || grid.ky_max() < b)
    throw ResolutionError("grid Nyquist wavenumber does not cover the cutoff support");
}

ComplexArray kernel_field(int k, double t, const SpectralGrid& grid, double a, double b) {
  require_kernel_resolution(k, grid, a, b);
  const CutoffFamily c = make_cutoffs(k, grid, a, b);
  const int nx = grid.n_x(), ny = grid.n_y();
  const auto& kx = grid.wavenumbers_x();
  const auto& ky = grid.wavenumbers_y();

  ComplexArray spec(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      spec(i, j) = c.psi1[i] * c.psi2[j] == 0.0
                       ? Complex{}
                       : c.psi1[i] * c.psi2[j] * std::polar(1.0, t * dispersion(kx[i], ky[j]));

  // inverse_full carries 1/(nx ny); the rectangle rule wants dkx dky.
  ComplexArray dft = fft::inverse_full(spec);
  const double scale = static_cast<double>(nx) * ny * grid.dkx() * grid.dky();

  ComplexArray out(nx, ny);
  for (int i = 0; i < nx; ++i) {
    const int si = (i + nx / 2) % nx;  // DFT index of x = (i - nx/2) dx
    for (int j = 0; j < ny; ++j) out(i, j) = scale * dft(si, (j + ny / 2) % ny);
  }
  return out;
}

KernelSample oscillatory_kernel(int k, double t, const SpectralGrid& grid, double a, double b) {
  KernelSample s;
  s.t = t;
  s.k = k;
  s.horizon = t;
  s.values = kernel_field(k, t, grid, a, b).abs();
  return s;
}

}  // namespace mzk
