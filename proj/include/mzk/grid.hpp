#pragma once

#include <numbers>

#include <Eigen/Dense>

#include "mzk/types.hpp"

namespace mzk {

/// Periodic box [-period_x/2, period_x/2) x [-period_y/2, period_y/2) with
/// its angular wavenumber tables in standard signed DFT order.
///
/// Physical sample (i, j) sits at x = (i - n_x/2) dx, y = (j - n_y/2) dy, so
/// the box centre is a grid point.
class SpectralGrid {
 public:
  SpectralGrid(int n_x, int n_y, double period_x, double period_y);

  int n_x() const { return n_x_; }
  int n_y() const { return n_y_; }
  /// Columns of a half (real-to-complex) spectrum.
  int n_y_half() const { return n_y_ / 2 + 1; }
  double period_x() const { return period_x_; }
  double period_y() const { return period_y_; }
  double dx() const { return period_x_ / n_x_; }
  double dy() const { return period_y_ / n_y_; }
  double cell_area() const { return dx() * dy(); }
  long size() const { return static_cast<long>(n_x_) * n_y_; }

  double x(int i) const { return (i - n_x_ / 2) * dx(); }
  double y(int j) const { return (j - n_y_ / 2) * dy(); }

  const Eigen::ArrayXd& wavenumbers_x() const { return kx_; }
  const Eigen::ArrayXd& wavenumbers_y() const { return ky_; }

  /// Wavenumber spacing 2 pi / period.
  double dkx() const { return 2.0 * std::numbers::pi / period_x_; }
  double dky() const { return 2.0 * std::numbers::pi / period_y_; }
  /// Magnitude of the Nyquist wavenumber.
  double kx_max() const { return 0.5 * n_x_ * dkx(); }
  double ky_max() const { return 0.5 * n_y_ * dky(); }

  bool is_nyquist_x(int i) const { return i == n_x_ / 2; }
  bool is_nyquist_y(int j) const { return j == n_y_ / 2; }

  /// Multiplicity of half-spectrum column j in a full-spectrum sum.
  double half_weight(int j) const { return (j == 0 || j == n_y_ / 2) ? 1.0 : 2.0; }

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.n_x_ == b.n_x_ && a.n_y_ == b.n_y_ && a.period_x_ == b.period_x_ &&
           a.period_y_ == b.period_y_;
  }

 private:
  int n_x_;
  int n_y_;
  double period_x_;
  double period_y_;
  Eigen::ArrayXd kx_;
  Eigen::ArrayXd ky_;
};

/// Validating factory; throws ConfigurationError for sizes that are not
/// powers of two >= 16 or non-positive periods.
SpectralGrid make_grid(int n_x, int n_y, double period_x, double period_y);

/// Signed DFT-order wavenumbers 2 pi j / period.
Eigen::ArrayXd dft_wavenumbers(int n, double period);

bool is_power_of_two(long n);

}  // namespace mzk
