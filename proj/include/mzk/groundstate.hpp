#pragma once

#include <utility>
#include <vector>

#include "mzk/field.hpp"

namespace mzk {

/// Ground state Q_c of Laplacian(Q) - c Q + Q^3 = 0 on a periodic box.
struct GroundStateResult {
  Field2D field;
  double speed = 1.0;
  double residual = 0.0;  // discrete L2 norm of Laplacian(Q) - cQ + Q^3
  int iterations = 0;
  double mass = 0.0;  // ||Q||_{L2}^2
  /// (int Q^4 / int Q^2, int |grad Q|^2 / int Q^2); (2, 1) for c = 1.
  std::pair<double, double> pohozaev_ratios;
  double stabilization_factor = 1.0;  // final Petviashvili factor S_n
  std::vector<double> residual_history;
};

/// Petviashvili iteration Q <- S^{3/2} (c - Laplacian)^{-1} Q^3 with
/// S = <(c - Laplacian) Q, Q> / <Q^3, Q>, seeded by a centred Gaussian and
/// stopped once the equation residual is <= tol.
///
/// Throws ConfigurationError if c <= 0 or the box is too small for the
/// profile to decay (exp(-sqrt(c) min(period)/2) >= 1e-8), and
/// ConvergenceError (with the residual history) after max_iter iterations.
GroundStateResult solve_ground_state(double c, const SpectralGrid& grid, double tol = 1e-10,
                                     int max_iter = 500);

/// Equation residual Laplacian(Q) - cQ + Q^3 as a field.
Field2D ground_state_residual(const Field2D& q, double c);

/// amplitude_factor * Q_c, centred in the box.
Field2D soliton_initial_data(const GroundStateResult& result, double amplitude_factor);

}  // namespace mzk
