#pragma once

#include <cmath>

#include "mzk/field.hpp"
#include "mzk/spectral.hpp"

namespace helpers {

inline double max_abs_diff(const mzk::Field2D& a, const mzk::Field2D& b) {
  return (a.physical() - b.physical()).abs().maxCoeff();
}

inline double rel_l2(const mzk::Field2D& a, const mzk::Field2D& b) {
  const double ref = mzk::l2_norm(b);
  return mzk::l2_norm(a - b) / (ref > 0.0 ? ref : 1.0);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace helpers
