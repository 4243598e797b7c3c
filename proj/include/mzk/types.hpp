#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mzk {

using Complex = std::complex<double>;

/// Physical samples, n_x rows by n_y columns, flat index i_x * n_y + i_y.
using RealArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Complex samples in the same row-major layout. Half spectra of real fields
/// have n_y / 2 + 1 columns; full spectra have n_y.
using ComplexArray = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Axis { x, y };

}  // namespace mzk
