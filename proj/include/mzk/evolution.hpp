#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mzk/field.hpp"

namespace mzk {

/// Coefficient kappa of u_t + d_x Laplacian(u) + kappa u^2 u_x = 0. With
/// kappa = 3 the equation reads u_t + d_x(Laplacian(u) + u^3) = 0: its
/// travelling waves are Q_c(x - ct, y) with Laplacian(Q_c) - c Q_c + Q_c^3 = 0
/// and it conserves E = 1/2 int |grad u|^2 - 1/4 int u^4.
inline constexpr double kStandardCoupling = 3.0;

/// Stability constant C in dt <= C h / ||u||_inf^2 (h the smaller grid
/// spacing). Largest stable value on the c = 1 soliton at 256^2, period 40,
/// halved.
inline constexpr double kDefaultCflConstant = 0.4;

/// -kappa u^2 u_x evaluated as -(kappa/3) d_x(u^3), with the 2/3 rule applied
/// to the cube when dealias is set.
Field2D nonlinear_term(const Field2D& u, double coupling = kStandardCoupling, bool dealias = true);

/// Spectral form of nonlinear_term with the multiplier and mask cached.
class NonlinearOperator {
 public:
  NonlinearOperator(const SpectralGrid& grid, double coupling, bool dealias);
  /// N(u) from the half spectrum of u; writes max |u| to *linf if given.
  ComplexArray operator()(const ComplexArray& u_hat, double* linf = nullptr) const;
  bool active() const { return coupling_ != 0.0; }

 private:
  SpectralGrid grid_;
  double coupling_;
  ComplexArray multiplier_;
};

/// Classical RK4 on w = U(-t) u with the exact group supplying the linear
/// phases. Keeps the phase tables of the last step size.
class IfRk4Stepper {
 public:
  IfRk4Stepper(const SpectralGrid& grid, double coupling = kStandardCoupling, bool dealias = true);
  /// Advances u_hat by dt (dt may be negative). Throws InstabilityError on a
  /// non-finite result. Sets linf_at_start().
  ComplexArray step(const ComplexArray& u_hat, double dt);
  double linf_at_start() const { return linf_; }

 private:
  SpectralGrid grid_;
  NonlinearOperator nonlinear_;
  double cached_dt_ = 0.0;
  ComplexArray half_;
  ComplexArray full_;
  double linf_ = 0.0;
};

Field2D step_ifrk4(const Field2D& u, double dt, double coupling = kStandardCoupling,
                   bool dealias = true);

struct EvolveConfig {
  double t_end = 1.0;
  double dt_init = 1e-3;
  double dt_min = 1e-9;
  double cfl_safety = 0.9;
  double cfl_constant = kDefaultCflConstant;
  bool dealias = true;
  int sample_every = 10;
  double blowup_gradient_factor = 50.0;
  double s_monitor = 0.9;
  double coupling = kStandardCoupling;
  /// Store a snapshot every this many samples; 0 disables.
  int snapshot_every = 0;

  /// Throws ConfigurationError when a field is out of range.
  void validate() const;
};

enum class Outcome { completed, blowup_detected, dt_underflow };
std::string to_string(Outcome o);

struct TrajectoryRow {
  double t, mass, energy, grad_l2, hs_norm, linf, dt;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> grad_l2;
  std::vector<double> hs_norm;
  std::vector<double> linf;
  std::vector<double> dt_history;
  Outcome outcome = Outcome::completed;
  std::vector<std::pair<double, Field2D>> snapshots;
  /// Final state, whatever the outcome.
  std::optional<Field2D> final_state;
  long steps = 0;

  std::size_t size() const { return times.size(); }
  TrajectoryRow row(std::size_t k) const;
  void push(const TrajectoryRow& r);
};

/// Receives every recorded sample from the integration loop.
using SampleSink = std::function<void(const TrajectoryRow&)>;

/// Integrates to cfg.t_end with dt = cfl_safety * min(dt_init, C h / ||u||_inf^2),
/// recording diagnostics every sample_every steps (plus the first and last
/// states). Stops early with blowup_detected once ||grad u|| exceeds
/// blowup_gradient_factor times its initial value, or dt_underflow once the
/// admissible dt falls below dt_min.
Trajectory evolve(const Field2D& u0, const EvolveConfig& cfg, const SampleSink& sink = {});

struct PicardResult {
  SpaceTimeSlab slab;                   // final iterate
  std::vector<double> iterate_norms;    // L^inf_T L^2 of u^(0), u^(1), ...
  std::vector<double> difference_norms; // L^inf_T L^2 of u^(n+1) - u^(n)
};

/// Iterates Psi(u)(t) = U(t) u0 + int_0^t U(t - t') N(u(t')) dt' from
/// u^(0)(t) = U(t) u0 on n_time_samples uniform nodes in [0, T], trapezoid
/// rule in t'. Throws ContractionError if an iterate's norm grows by more than
/// 10x over the previous one.
PicardResult picard_iterate(const Field2D& u0, double T, int n_iter, int n_time_samples,
                            double coupling = kStandardCoupling, bool dealias = true);

}  // namespace mzk
