#include "mzk/grid.hpp"

#include <cmath>
#include <string>

#include "mzk/errors.hpp"

namespace mzk {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::ArrayXd dft_wavenumbers(int n, double period) {
  Eigen::ArrayXd k(n);
  const double dk = 2.0 * std::numbers::pi / period;
  for (int j = 0; j < n; ++j) k[j] = dk * (j < n / 2 ? j : j - n);
  return k;
}

SpectralGrid::SpectralGrid(int n_x, int n_y, double period_x, double period_y)
    : n_x_(n_x), n_y_(n_y), period_x_(period_x), period_y_(period_y) {
  for (int n : {n_x, n_y}) {
    if (n < 16 || !is_power_of_two(n))
      throw ConfigurationError("grid size " + std::to_string(n) +
                               " is not a power of two >= 16");
  }
  for (double p : {period_x, period_y}) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw ConfigurationError("grid period must be positive and finite, got " +
                               std::to_string(p));
  }
  kx_ = dft_wavenumbers(n_x, period_x);
  ky_ = dft_wavenumbers(n_y, period_y);
}

SpectralGrid make_grid(int n_x, int n_y, double period_x, double period_y) {
  return SpectralGrid(n_x, n_y, period_x, period_y);
}

}  // namespace mzk
