#pragma once

#include "mzk/types.hpp"

namespace mzk::fft {

// Thin FFTW wrappers. Plans are cached per shape behind a mutex; execution
// uses the new-array interface and is safe from concurrent threads.
//
// Forward transforms are unnormalized sums; inverse transforms carry the
// 1 / (n_x n_y) factor.

/// Real n_x x n_y samples to the n_x x (n_y/2 + 1) half spectrum.
ComplexArray forward(const RealArray& physical);

/// Half spectrum back to real samples; n_y is needed to resolve the parity
/// of the last dimension.
RealArray inverse(const ComplexArray& half_spectrum, int n_y);

/// Full complex transforms over n_x x n_y.
ComplexArray forward_full(const ComplexArray& samples);
ComplexArray inverse_full(const ComplexArray& spectrum);

}  // namespace mzk::fft
