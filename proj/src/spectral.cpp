#include "mzk/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mzk/errors.hpp"

namespace mzk {

Field2D frac_deriv(const Field2D& f, double alpha, Axis axis) {
  if (!(alpha >= 0.0)) throw DomainError("fractional derivative order must be >= 0");
  if (alpha == 0.0) return f;
  auto s = apply_multiplier(f.grid(), f.spectral(), [&](double kx, double ky, int, int) {
    return Complex(std::pow(std::abs(axis == Axis::x ? kx : ky), alpha), 0.0);
  });
  return Field2D::from_spectrum(f.grid(), std::move(s));
}

Field2D partial_deriv(const Field2D& f, Axis axis) {
  const auto& g = f.grid();
  auto s = apply_multiplier(g, f.spectral(), [&](double kx, double ky, int i, int j) {
    if (axis == Axis::x) return g.is_nyquist_x(i) ? Complex{} : Complex(0.0, kx);
    return g.is_nyquist_y(j) ? Complex{} : Complex(0.0, ky);
  });
  return Field2D::from_spectrum(g, std::move(s));
}

double l2_norm(const Field2D& f) {
  return std::sqrt(f.grid().cell_area() * f.physical().square().sum());
}

namespace {

template <class Weight>
double weighted_spectral_sum(const Field2D& f, Weight&& w) {
  const auto& g = f.grid();
  const auto& kx = g.wavenumbers_x();
  const auto& ky = g.wavenumbers_y();
  const auto& s = f.spectral();
  double total = 0.0;
  for (int i = 0; i < g.n_x(); ++i) {
    double row = 0.0;
    for (int j = 0; j < g.n_y_half(); ++j) row += g.half_weight(j) * w(kx[i], ky[j]) * std::norm(s(i, j));
    total += row;
  }
  return total * g.cell_area() / static_cast<double>(g.size());
}

}  // namespace

double sobolev_norm(const Field2D& f, double s) {
  if (s == 0.0) return std::sqrt(weighted_spectral_sum(f, [](double, double) { return 1.0; }));
  return std::sqrt(weighted_spectral_sum(
      f, [s](double kx, double ky) { return std::pow(1.0 + kx * kx + ky * ky, s); }));
}

double gradient_l2_squared(const Field2D& f) {
  const auto& g = f.grid();
  // Odd derivatives drop the Nyquist modes, matching partial_deriv.
  const double kxn = g.kx_max(), kyn = g.ky_max();
  return weighted_spectral_sum(f, [&](double kx, double ky) {
    const double ax = std::abs(kx) == kxn ? 0.0 : kx * kx;
    const double ay = std::abs(ky) == kyn ? 0.0 : ky * ky;
    return ax + ay;
  });
}

double linf_norm(const Field2D& f) { return f.physical().abs().maxCoeff(); }

double time_norm(std::span<const double> values, std::span<const double> times, double r) {
  if (values.size() != times.size() || values.empty())
    throw ConfigurationError("time_norm needs matching non-empty series");
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (values.size() < 2) throw QuadratureError("time integral over a single sample");
  double acc = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double h = times[k] - times[k - 1];
    acc += 0.5 * h * (std::pow(std::abs(values[k - 1]), r) + std::pow(std::abs(values[k]), r));
  }
  return std::pow(acc, 1.0 / r);
}

namespace {

// |a|^r with the common r = 2 case kept exact.
RealArray abs_pow(const RealArray& a, double r) {
  if (r == 2.0) return a.square();
  if (r == 1.0) return a.abs();
  return a.abs().pow(r);
}

}  // namespace

double mixed_norm(std::span<const RealArray> frames, std::span<const double> times, double dx,
                  double dy, MixedOrder order) {
  if (frames.empty() || frames.size() != times.size())
    throw ConfigurationError("mixed_norm needs a non-empty slab with one time per frame");
  const double p = order.p_x, q = order.q_y, r = order.r_t;
  for (double e : {p, q, r})
    if (!(e >= 1.0)) throw DomainError("mixed norm exponents must be >= 1");
  const auto rows = frames.front().rows(), cols = frames.front().cols();

  // Innermost: time. inner(i, j) holds ||f(., x_i, y_j)||_{L^r_T}^r, or the
  // sup over time when r is infinite.
  RealArray inner = RealArray::Zero(rows, cols);
  if (std::isinf(r)) {
    for (const auto& f : frames) inner = inner.max(f.abs());
  } else {
    if (frames.size() < 2) throw QuadratureError("time integral over a single frame");
    for (std::size_t k = 0; k < frames.size(); ++k) {
      double w = 0.0;
      if (k > 0) w += 0.5 * (times[k] - times[k - 1]);
      if (k + 1 < frames.size()) w += 0.5 * (times[k + 1] - times[k]);
      inner += w * abs_pow(frames[k], r);
    }
    inner = inner.pow(1.0 / r);
  }

  // Then y, then x.
  Eigen::ArrayXd by_x(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (std::isinf(q)) {
      by_x[i] = inner.row(i).maxCoeff();
    } else {
      by_x[i] = std::pow(dy * inner.row(i).pow(q).sum(), 1.0 / q);
    }
  }
  if (std::isinf(p)) return by_x.maxCoeff();
  return std::pow(dx * by_x.pow(p).sum(), 1.0 / p);
}

double mixed_norm(const SpaceTimeSlab& slab, MixedOrder order) {
  std::vector<RealArray> frames;
  frames.reserve(slab.size());
  for (const auto& f : slab.frames()) frames.push_back(f.physical());
  return mixed_norm(frames, slab.times(), slab.grid().dx(), slab.grid().dy(), order);
}

RealArray dealias_mask(const SpectralGrid& grid) {
  RealArray mask(grid.n_x(), grid.n_y_half());
  const double cx = 2.0 / 3.0 * grid.kx_max(), cy = 2.0 / 3.0 * grid.ky_max();
  for (int i = 0; i < grid.n_x(); ++i)
    for (int j = 0; j < grid.n_y_half(); ++j)
      mask(i, j) = (std::abs(grid.wavenumbers_x()[i]) <= cx &&
                    std::abs(grid.wavenumbers_y()[j]) <= cy)
                       ? 1.0
                       : 0.0;
  return mask;
}

}  // namespace mzk
