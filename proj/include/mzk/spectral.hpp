#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mzk/field.hpp"

namespace mzk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Multiplies the half spectrum of f by m(kx, ky, i, j), where (i, j) are the
/// half-spectrum indices. The multiplier must be Hermitian-compatible
/// (m(-k) = conj(m(k))) for the result to be the transform of a real field.
template <class Multiplier>
ComplexArray apply_multiplier(const SpectralGrid& grid, const ComplexArray& spectrum,
                              Multiplier&& m) {
  ComplexArray out(spectrum.rows(), spectrum.cols());
  const auto& kx = grid.wavenumbers_x();
  const auto& ky = grid.wavenumbers_y();
  for (int i = 0; i < grid.n_x(); ++i)
    for (int j = 0; j < grid.n_y_half(); ++j) out(i, j) = m(kx[i], ky[j], i, j) * spectrum(i, j);
  return out;
}

/// |xi|^alpha (or |eta|^alpha) applied spectrally; alpha < 0 is a DomainError.
Field2D frac_deriv(const Field2D& f, double alpha, Axis axis);

/// Spectral i*xi (or i*eta) multiplier with the Nyquist mode zeroed.
Field2D partial_deriv(const Field2D& f, Axis axis);

/// Discrete L2 norm sqrt(dx dy sum u^2) computed in physical space.
double l2_norm(const Field2D& f);

/// sqrt(dx dy / (n_x n_y) sum (1 + xi^2 + eta^2)^s |f_hat|^2). At s = 0 this
/// is l2_norm by Parseval.
double sobolev_norm(const Field2D& f, double s);

/// Squared L2 norm of grad f, computed spectrally.
double gradient_l2_squared(const Field2D& f);

/// max |f| over the grid.
double linf_norm(const Field2D& f);

/// Exponents of ||f||_{L^p_x L^q_y L^r_T}; any value >= 1 or kInf.
struct MixedOrder {
  double p_x;
  double q_y;
  double r_t;
};

/// Mixed space-time norm, evaluated innermost-to-outermost in the order t,
/// y, x. Time integrals use the trapezoid rule over the slab times; space
/// integrals are Riemann sums; infinite exponents become grid maxima of |f|.
/// A single-frame slab with finite r_t throws QuadratureError.
double mixed_norm(const SpaceTimeSlab& slab, MixedOrder order);

/// Same norm over raw frames, for lattices that are not SpectralGrids.
double mixed_norm(std::span<const RealArray> frames, std::span<const double> times, double dx,
                  double dy, MixedOrder order);

/// ||g||_{L^r(times)} of a scalar series by the trapezoid rule (max for r = kInf).
double time_norm(std::span<const double> values, std::span<const double> times, double r);

/// 2/3-rule mask over the half spectrum: 1 where |xi| <= (2/3) xi_max and
/// |eta| <= (2/3) eta_max, else 0.
RealArray dealias_mask(const SpectralGrid& grid);

}  // namespace mzk
