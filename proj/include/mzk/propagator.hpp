#pragma once

#include "mzk/field.hpp"

namespace mzk {

/// Dispersion relation of u_t + d_x Laplacian u = 0: omega = xi^3 + xi eta^2.
inline double dispersion(double xi, double eta) { return xi * xi * xi + xi * eta * eta; }

/// exp(i t omega) over the half spectrum. The x-Nyquist row is left at 1 so
/// the multiplier stays Hermitian-compatible.
ComplexArray group_multiplier(const SpectralGrid& grid, double t);

/// Exact linear flow U(t) f.
Field2D apply_group(const Field2D& f, double t);

/// Fixed smooth step: 0 for x <= 0, 1 for x >= 1, g(x) / (g(x) + g(1 - x))
/// with g(x) = exp(-1/x) in between. Satisfies mu(x) + mu(1 - x) = 1.
double smooth_cutoff(double x);

/// One-dimensional cutoffs psi1(xi) = mu(a - |xi|), psi2(eta) = mu(b - |eta|)
/// tabulated on the grid's wavenumbers, for dyadic level k.
struct CutoffFamily {
  int k = 0;
  double a = 0.0;
  double b = 0.0;
  Eigen::ArrayXd psi1;  // over wavenumbers_x
  Eigen::ArrayXd psi2;  // over wavenumbers_y
};

CutoffFamily make_cutoffs(int k, const SpectralGrid& grid, double a, double b);

/// Dyadic partition of unity psi_k(xi, eta) over the full spectrum (n_x x n_y,
/// DFT order). psi_0 = mu(2 - |xi|) mu(2 - |eta|); for k >= 1 the corona
///   mu(2^{k+1} - |xi|) mu(2^{k+1} - |eta|) mu(|eta| - 2^k + 1)
///   + mu(2^{k+1} - |xi|) mu(|xi| - 2^k + 1) mu(2^k - |eta|).
RealArray dyadic_partition(int k, const SpectralGrid& grid);

/// |J(t, x, y)| over the physical grid for one (k, t).
struct KernelSample {
  double t = 0.0;
  int k = 0;
  double horizon = 0.0;  // envelope horizon T this sample belongs to
  RealArray values;      // centred layout, like Field2D::physical()
};

/// Complex kernel
///   J(t, x, y) = iint exp(i(t xi^3 + t xi eta^2 + x xi + y eta)) psi1(xi) psi2(eta) dxi deta
/// by rectangle-rule sampling on the grid's wavenumbers and one inverse
/// transform. Output is in centred layout (index n/2 <-> x = 0). The result
/// is the box-periodic sum of the continuous kernel.
///
/// Throws ResolutionError unless the wavenumber spacing is <= 1/8 and the
/// Nyquist wavenumber covers the cutoff support, and DomainError unless
/// 0 < a, b <= 2^{k+1}.
ComplexArray kernel_field(int k, double t, const SpectralGrid& grid, double a, double b);

KernelSample oscillatory_kernel(int k, double t, const SpectralGrid& grid, double a, double b);

/// Checks the resolution rule used by kernel_field.
void require_kernel_resolution(int k, const SpectralGrid& grid, double a, double b);

}  // namespace mzk
