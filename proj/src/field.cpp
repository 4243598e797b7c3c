#include "mzk/field.hpp"

#include <cmath>
#include <string>

#include "mzk/errors.hpp"
#include "mzk/fft.hpp"

namespace mzk {
namespace {

void require_same_grid(const Field2D& a, const Field2D& b) {
  if (!(a.grid() == b.grid())) throw ConfigurationError("fields live on different grids");
}

}  // namespace

Field2D::Field2D(SpectralGrid grid, RealArray physical, ComplexArray spectral)
    : grid_(std::move(grid)), physical_(std::move(physical)), spectral_(std::move(spectral)) {}

Field2D Field2D::from_physical(SpectralGrid grid, RealArray physical) {
  if (physical.rows() != grid.n_x() || physical.cols() != grid.n_y())
    throw ConfigurationError("physical array shape does not match the grid");
  if (!physical.allFinite()) throw DomainError("field contains non-finite samples");
  ComplexArray spectral = fft::forward(physical);
  return Field2D(std::move(grid), std::move(physical), std::move(spectral));
}

Field2D Field2D::from_spectrum(SpectralGrid grid, ComplexArray half_spectrum) {
  if (half_spectrum.rows() != grid.n_x() || half_spectrum.cols() != grid.n_y_half())
    throw ConfigurationError("spectral array shape does not match the grid");
  RealArray physical = fft::inverse(half_spectrum, grid.n_y());
  if (!physical.allFinite()) throw DomainError("field contains non-finite samples");
  // Round-trip once so the stored spectrum is exactly Hermitian-consistent.
  ComplexArray spectral = fft::forward(physical);
  return Field2D(std::move(grid), std::move(physical), std::move(spectral));
}

Field2D Field2D::zeros(SpectralGrid grid) {
  RealArray p = RealArray::Zero(grid.n_x(), grid.n_y());
  ComplexArray s = ComplexArray::Zero(grid.n_x(), grid.n_y_half());
  return Field2D(std::move(grid), std::move(p), std::move(s));
}

Field2D Field2D::from_function(SpectralGrid grid, const std::function<double(double, double)>& f) {
  RealArray p(grid.n_x(), grid.n_y());
  for (int i = 0; i < grid.n_x(); ++i)
    for (int j = 0; j < grid.n_y(); ++j) p(i, j) = f(grid.x(i), grid.y(j));
  return from_physical(std::move(grid), std::move(p));
}

Field2D operator+(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  return Field2D::from_physical(a.grid(), a.physical() + b.physical());
}

Field2D operator-(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  return Field2D::from_physical(a.grid(), a.physical() - b.physical());
}

Field2D operator*(double s, const Field2D& a) {
  return Field2D::from_physical(a.grid(), s * a.physical());
}

Field2D operator-(const Field2D& a) { return -1.0 * a; }

Field2D roll(const Field2D& f, int shift_x, int shift_y) {
  const int nx = f.grid().n_x(), ny = f.grid().n_y();
  RealArray out(nx, ny);
  for (int i = 0; i < nx; ++i) {
    const int si = ((i - shift_x) % nx + nx) % nx;
    for (int j = 0; j < ny; ++j) out(i, j) = f(si, ((j - shift_y) % ny + ny) % ny);
  }
  return Field2D::from_physical(f.grid(), std::move(out));
}

Field2D translate(const Field2D& f, double dx, double dy) {
  const auto& g = f.grid();
  ComplexArray s = f.spectral();
  for (int i = 0; i < g.n_x(); ++i) {
    const double kx = g.is_nyquist_x(i) ? 0.0 : g.wavenumbers_x()[i];
    for (int j = 0; j < g.n_y_half(); ++j) {
      const double ky = g.is_nyquist_y(j) ? 0.0 : g.wavenumbers_y()[j];
      s(i, j) *= std::polar(1.0, -(kx * dx + ky * dy));
    }
  }
  return Field2D::from_spectrum(g, std::move(s));
}

SpaceTimeSlab::SpaceTimeSlab(std::vector<double> times, std::vector<Field2D> frames)
    : times_(std::move(times)), frames_(std::move(frames)) {
  if (times_.empty()) throw ConfigurationError("slab needs at least one time");
  if (times_.size() != frames_.size())
    throw ConfigurationError("slab has " + std::to_string(times_.size()) + " times but " +
                             std::to_string(frames_.size()) + " frames");
  if (times_.front() < 0.0) throw ConfigurationError("slab times must be >= 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1]))
      throw ConfigurationError("slab times must be strictly increasing");
    if (!(frames_[k].grid() == frames_.front().grid()))
      throw ConfigurationError("slab frames must share one grid");
  }
}

SpaceTimeSlab operator*(double s, const SpaceTimeSlab& slab) {
  std::vector<Field2D> frames;
  frames.reserve(slab.size());
  for (const auto& f : slab.frames()) frames.push_back(s * f);
  return SpaceTimeSlab(slab.times(), std::move(frames));
}

}  // namespace mzk
