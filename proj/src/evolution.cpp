#include "mzk/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "mzk/diagnostics.hpp"
#include "mzk/errors.hpp"
#include "mzk/fft.hpp"
#include "mzk/propagator.hpp"
#include "mzk/spectral.hpp"

namespace mzk {

NonlinearOperator::NonlinearOperator(const SpectralGrid& grid, double coupling, bool dealias)
    : grid_(grid), coupling_(coupling), multiplier_(grid.n_x(), grid.n_y_half()) {
  const RealArray mask =
      dealias ? dealias_mask(grid) : RealArray::Ones(grid.n_x(), grid.n_y_half()).eval();
  for (int i = 0; i < grid.n_x(); ++i) {
    const double kx = grid.is_nyquist_x(i) ? 0.0 : grid.wavenumbers_x()[i];
    for (int j = 0; j < grid.n_y_half(); ++j)
      multiplier_(i, j) = Complex(0.0, -coupling / 3.0 * kx * mask(i, j));
  }
}

ComplexArray NonlinearOperator::operator()(const ComplexArray& u_hat, double* linf) const {
  RealArray u = fft::inverse(u_hat, grid_.n_y());
  if (linf) *linf = u.abs().maxCoeff();
  if (!active()) return ComplexArray::Zero(u_hat.rows(), u_hat.cols());
  return multiplier_ * fft::forward(u.cube());
}

Field2D nonlinear_term(const Field2D& u, double coupling, bool dealias) {
  NonlinearOperator op(u.grid(), coupling, dealias);
  return Field2D::from_spectrum(u.grid(), op(u.spectral()));
}

IfRk4Stepper::IfRk4Stepper(const SpectralGrid& grid, double coupling, bool dealias)
    : grid_(grid), nonlinear_(grid, coupling, dealias) {}

ComplexArray IfRk4Stepper::step(const ComplexArray& u_hat, double dt) {
  if (dt != cached_dt_ || half_.size() == 0) {
    half_ = group_multiplier(grid_, 0.5 * dt);
    full_ = half_ * half_;
    cached_dt_ = dt;
  }
  const ComplexArray k1 = nonlinear_(u_hat, &linf_);
  if (!nonlinear_.active()) return full_ * u_hat;

  const ComplexArray k2 = nonlinear_(half_ * (u_hat + (0.5 * dt) * k1));
  const ComplexArray k3 = nonlinear_(half_ * u_hat + (0.5 * dt) * k2);
  const ComplexArray k4 = nonlinear_(full_ * u_hat + dt * (half_ * k3));
  ComplexArray out = full_ * u_hat + (dt / 6.0) * (full_ * k1 + 2.0 * half_ * (k2 + k3) + k4);
  if (!out.allFinite()) throw InstabilityError("non-finite state in IFRK4 step");
  return out;
}

Field2D step_ifrk4(const Field2D& u, double dt, double coupling, bool dealias) {
  if (dt == 0.0) throw DomainError("step size must be non-zero");
  IfRk4Stepper stepper(u.grid(), coupling, dealias);
  return Field2D::from_spectrum(u.grid(), stepper.step(u.spectral(), dt));
}

void EvolveConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigurationError("evolve: " + what); };
  if (!(t_end > 0.0)) fail("t_end must be > 0");
  if (!(dt_init > 0.0)) fail("dt_init must be > 0");
  if (!(dt_min > 0.0 && dt_min < dt_init)) fail("need 0 < dt_min < dt_init");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) fail("cfl_safety must lie in (0, 1)");
  if (!(cfl_constant > 0.0)) fail("cfl_constant must be > 0");
  if (sample_every < 1) fail("sample_every must be >= 1");
  if (!(blowup_gradient_factor > 1.0)) fail("blowup_gradient_factor must be > 1");
  if (!(s_monitor > 0.75)) fail("s_monitor must exceed 3/4");
  if (snapshot_every < 0) fail("snapshot_every must be >= 0");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::completed: return "completed";
    case Outcome::blowup_detected: return "blowup_detected";
    case Outcome::dt_underflow: return "dt_underflow";
  }
  return "unknown";
}

TrajectoryRow Trajectory::row(std::size_t k) const {
  return {times[k], mass[k], energy[k], grad_l2[k], hs_norm[k], linf[k], dt_history[k]};
}

void Trajectory::push(const TrajectoryRow& r) {
  times.push_back(r.t);
  mass.push_back(r.mass);
  energy.push_back(r.energy);
  grad_l2.push_back(r.grad_l2);
  hs_norm.push_back(r.hs_norm);
  linf.push_back(r.linf);
  dt_history.push_back(r.dt);
}

namespace {

TrajectoryRow diagnose(const Field2D& u, double t, double dt, const EvolveConfig& cfg) {
  return {t,
          mass(u),
          energy(u, cfg.coupling),
          std::sqrt(gradient_l2_squared(u)),
          sobolev_norm(u, cfg.s_monitor),
          linf_norm(u),
          dt};
}

}  // namespace

Trajectory evolve(const Field2D& u0, const EvolveConfig& cfg, const SampleSink& sink) {
  cfg.validate();
  const SpectralGrid& grid = u0.grid();
  Trajectory traj;
  std::size_t samples = 0;
  auto record = [&](const Field2D& u, double t, double dt) {
    const TrajectoryRow r = diagnose(u, t, dt, cfg);
    traj.push(r);
    if (sink) sink(r);
    if (cfg.snapshot_every > 0 && samples % cfg.snapshot_every == 0) traj.snapshots.emplace_back(t, u);
    ++samples;
  };

  if ((u0.physical() == 0.0).all()) {
    record(u0, 0.0, 0.0);
    record(u0, cfg.t_end, 0.0);
    traj.final_state = u0;
    return traj;
  }

  IfRk4Stepper stepper(grid, cfg.coupling, cfg.dealias);
  const double h = std::min(grid.dx(), grid.dy());
  const double grad0 = std::sqrt(gradient_l2_squared(u0));

  ComplexArray u_hat = u0.spectral();
  double t = 0.0;
  double linf = linf_norm(u0);
  record(u0, 0.0, 0.0);

  while (t < cfg.t_end) {
    double dt = cfg.cfl_safety * std::min(cfg.dt_init, cfg.cfl_constant * h / (linf * linf));
    if (dt < cfg.dt_min) {
      traj.outcome = Outcome::dt_underflow;
      break;
    }
    if (t + dt > cfg.t_end) dt = cfg.t_end - t;

    ComplexArray next;
    for (;;) {
      try {
        next = stepper.step(u_hat, dt);
        break;
      } catch (const InstabilityError&) {
        dt *= 0.5;
        if (dt < cfg.dt_min) break;
      }
    }
    if (next.size() == 0) {
      traj.outcome = Outcome::dt_underflow;
      break;
    }

    u_hat = std::move(next);
    // Land exactly on t_end when the step was clipped.
    t = (t + dt >= cfg.t_end) ? cfg.t_end : t + dt;
    ++traj.steps;

    const Field2D u = Field2D::from_spectrum(grid, u_hat);
    u_hat = u.spectral();
    linf = linf_norm(u);
    const bool blowup = std::sqrt(gradient_l2_squared(u)) >= cfg.blowup_gradient_factor * grad0;
    if (blowup || traj.steps % cfg.sample_every == 0 || t >= cfg.t_end) record(u, t, dt);
    if (blowup) {
      traj.outcome = Outcome::blowup_detected;
      break;
    }
  }

  traj.final_state = Field2D::from_spectrum(grid, u_hat);
  return traj;
}

PicardResult picard_iterate(const Field2D& u0, double T, int n_iter, int n_time_samples,
                            double coupling, bool dealias) {
  if (!(T > 0.0)) throw DomainError("Picard horizon must be > 0");
  if (n_iter < 1) throw DomainError("Picard needs n_iter >= 1");
  if (n_time_samples < 2) throw DomainError("Picard needs at least two time nodes");
  const SpectralGrid& grid = u0.grid();
  const int m = n_time_samples;
  const double h = T / (m - 1);

  std::vector<double> times(m);
  std::vector<ComplexArray> forward_phase(m);
  for (int j = 0; j < m; ++j) {
    times[j] = (j == m - 1) ? T : j * h;
    forward_phase[j] = group_multiplier(grid, times[j]);
  }

  auto slab_norm = [&](const std::vector<ComplexArray>& frames) {
    double best = 0.0;
    for (const auto& f : frames) {
      double acc = 0.0;
      for (int i = 0; i < grid.n_x(); ++i)
        for (int j = 0; j < grid.n_y_half(); ++j) acc += grid.half_weight(j) * std::norm(f(i, j));
      best = std::max(best, std::sqrt(acc * grid.cell_area() / static_cast<double>(grid.size())));
    }
    return best;
  };

  std::vector<ComplexArray> iterate(m);
  for (int j = 0; j < m; ++j) iterate[j] = forward_phase[j] * u0.spectral();

  PicardResult result{SpaceTimeSlab({0.0}, {u0}), {}, {}};
  result.iterate_norms.push_back(slab_norm(iterate));

  const NonlinearOperator nonlinear(grid, coupling, dealias);
  for (int n = 0; n < n_iter; ++n) {
    // Interaction picture: v_j = U(-t_j) N(u(t_j)), integrated cumulatively.
    std::vector<ComplexArray> next(m);
    ComplexArray acc = ComplexArray::Zero(grid.n_x(), grid.n_y_half());
    ComplexArray prev_v;
    for (int j = 0; j < m; ++j) {
      ComplexArray v = forward_phase[j].conjugate() * nonlinear(iterate[j]);
      if (j > 0) acc += (0.5 * h) * (prev_v + v);
      next[j] = forward_phase[j] * (u0.spectral() + acc);
      prev_v = std::move(v);
    }
    std::vector<ComplexArray> diff(m);
    for (int j = 0; j < m; ++j) diff[j] = next[j] - iterate[j];
    const double norm = slab_norm(next);
    result.difference_norms.push_back(slab_norm(diff));
    result.iterate_norms.push_back(norm);
    const double previous = result.iterate_norms[result.iterate_norms.size() - 2];
    if (norm > 10.0 * previous && norm > 0.0)
      throw ContractionError("Picard iterates diverge", result.iterate_norms);
    iterate = std::move(next);
  }

  std::vector<Field2D> frames;
  frames.reserve(m);
  for (int j = 0; j < m; ++j) frames.push_back(Field2D::from_spectrum(grid, iterate[j]));
  result.slab = SpaceTimeSlab(std::move(times), std::move(frames));
  return result;
}

}  // namespace mzk
