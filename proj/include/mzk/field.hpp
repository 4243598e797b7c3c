#pragma once

#include <functional>
#include <vector>

#include "mzk/grid.hpp"
#include "mzk/types.hpp"

namespace mzk {

/// One real scalar field on a SpectralGrid, holding both its physical samples
/// and its half spectrum. Both views are filled at construction, so a Field2D
/// is immutable and can be shared between threads freely.
class Field2D {
 public:
  static Field2D from_physical(SpectralGrid grid, RealArray physical);
  static Field2D from_spectrum(SpectralGrid grid, ComplexArray half_spectrum);
  static Field2D zeros(SpectralGrid grid);
  /// Samples f(x, y) at the grid's centred coordinates.
  static Field2D from_function(SpectralGrid grid, const std::function<double(double, double)>& f);

  const SpectralGrid& grid() const { return grid_; }
  const RealArray& physical() const { return physical_; }
  const ComplexArray& spectral() const { return spectral_; }

  double operator()(int i, int j) const { return physical_(i, j); }

 private:
  Field2D(SpectralGrid grid, RealArray physical, ComplexArray spectral);

  SpectralGrid grid_;
  RealArray physical_;
  ComplexArray spectral_;
};

// Arithmetic on fields; results are rebuilt from physical samples.
Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double s, const Field2D& a);
inline Field2D operator*(const Field2D& a, double s) { return s * a; }
Field2D operator-(const Field2D& a);

/// Periodic shift by whole grid cells: result(i, j) = f(i - shift_x, j - shift_y).
Field2D roll(const Field2D& f, int shift_x, int shift_y);

/// Spectral translation by an arbitrary distance: result(x, y) = f(x - dx, y - dy).
Field2D translate(const Field2D& f, double dx, double dy);

/// Time-sampled stack of fields on one grid.
class SpaceTimeSlab {
 public:
  SpaceTimeSlab(std::vector<double> times, std::vector<Field2D> frames);

  const SpectralGrid& grid() const { return frames_.front().grid(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Field2D>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }

 private:
  std::vector<double> times_;
  std::vector<Field2D> frames_;
};

SpaceTimeSlab operator*(double s, const SpaceTimeSlab& slab);

}  // namespace mzk
