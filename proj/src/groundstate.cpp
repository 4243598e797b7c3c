#include "mzk/groundstate.hpp"

#include <cmath>
#include <string>

#include "mzk/errors.hpp"
#include "mzk/fft.hpp"
#include "mzk/spectral.hpp"

namespace mzk {
namespace {

RealArray symbol_k2(const SpectralGrid& g) {
  RealArray k2(g.n_x(), g.n_y_half());
  for (int i = 0; i < g.n_x(); ++i)
    for (int j = 0; j < g.n_y_half(); ++j)
      k2(i, j) = g.wavenumbers_x()[i] * g.wavenumbers_x()[i] +
                 g.wavenumbers_y()[j] * g.wavenumbers_y()[j];
  return k2;
}

double residual_norm(const SpectralGrid& g, const RealArray& q, const ComplexArray& q_hat,
                     const RealArray& k2, double c) {
  RealArray lap = fft::inverse(ComplexArray(-k2 * q_hat), g.n_y());
  RealArray r = lap - c * q + q.cube();
  return std::sqrt(g.cell_area() * r.square().sum());
}

}  // namespace

Field2D ground_state_residual(const Field2D& q, double c) {
  const auto& g = q.grid();
  RealArray k2 = symbol_k2(g);
  RealArray lap = fft::inverse(ComplexArray(-k2 * q.spectral()), g.n_y());
  return Field2D::from_physical(g, lap - c * q.physical() + q.physical().cube());
}

GroundStateResult solve_ground_state(double c, const SpectralGrid& grid, double tol, int max_iter) {
  if (!(c > 0.0)) throw ConfigurationError("ground state speed c must be positive");
  const double half_box = 0.5 * std::min(grid.period_x(), grid.period_y());
  if (std::exp(-std::sqrt(c) * half_box) >= 1e-8)
    throw ConfigurationError("box too small for the ground state to decay: exp(-sqrt(c) L/2) = " +
                             std::to_string(std::exp(-std::sqrt(c) * half_box)));

  const RealArray k2 = symbol_k2(grid);
  const RealArray op = c + k2;  // symbol of c - Laplacian
  const double area = grid.cell_area();

  // Seed: Gaussian of the expected height and width.
  RealArray q(grid.n_x(), grid.n_y());
  for (int i = 0; i < grid.n_x(); ++i)
    for (int j = 0; j < grid.n_y(); ++j) {
      const double r2 = c * (grid.x(i) * grid.x(i) + grid.y(j) * grid.y(j));
      q(i, j) = 2.2 * std::sqrt(c) * std::exp(-0.5 * r2);
    }

  std::vector<double> history;
  ComplexArray q_hat = fft::forward(q);
  double s_factor = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double res = residual_norm(grid, q, q_hat, k2, c);
    history.push_back(res);
    if (res <= tol) {
      GroundStateResult out{Field2D::from_physical(grid, q), c, res, it, 0.0, {}, 1.0, {}};
      out.speed = c;
      out.residual = res;
      out.iterations = it;
      out.residual_history = std::move(history);
      out.stabilization_factor = s_factor;
      const double m = area * q.square().sum();
      out.mass = m;
      out.pohozaev_ratios = {area * q.square().square().sum() / m,
                             gradient_l2_squared(out.field) / m};
      return out;
    }
    if (!std::isfinite(res)) break;

    RealArray q3 = q.cube();
    ComplexArray q3_hat = fft::forward(q3);
    // <(c - Lap) Q, Q> by Parseval, <Q^3, Q> in physical space.
    double num = 0.0;
    for (int i = 0; i < grid.n_x(); ++i)
      for (int j = 0; j < grid.n_y_half(); ++j)
        num += grid.half_weight(j) * op(i, j) * std::norm(q_hat(i, j));
    num /= static_cast<double>(grid.size());
    const double den = (q3 * q).sum();
    s_factor = num / den;
    q_hat = std::pow(s_factor, 1.5) * q3_hat / op;
    q = fft::inverse(q_hat, grid.n_y());
  }
  throw ConvergenceError("Petviashvili iteration did not reach residual " + std::to_string(tol) +
                             " within " + std::to_string(max_iter) + " iterations",
                         std::move(history));
}

Field2D soliton_initial_data(const GroundStateResult& result, double amplitude_factor) {
  if (!(amplitude_factor > 0.0)) throw DomainError("amplitude factor must be positive");
  return amplitude_factor * result.field;
}

}  // namespace mzk
