// Bisects the largest stable CFL constant on the c = 1 soliton (256^2 grid,
// period 40, t_end = 5) and prints it together with the halved default.
// A run counts as stable when it completes and the relative mass change stays
// below 1e-2.
#include <cmath>
#include <cstdio>

#include "mzk/evolution.hpp"
#include "mzk/groundstate.hpp"

int main() {
  const auto grid = mzk::make_grid(256, 256, 40.0, 40.0);
  const auto q = mzk::solve_ground_state(1.0, grid);

  auto stable = [&](double c) {
    mzk::EvolveConfig cfg;
    cfg.t_end = 5.0;
    cfg.dt_init = 1.0;  // let the CFL term decide
    cfg.cfl_constant = c;
    cfg.cfl_safety = 0.999999;
    cfg.sample_every = 1 << 30;
    const auto traj = mzk::evolve(q.field, cfg);
    const double drift = std::abs(traj.mass.back() / traj.mass.front() - 1.0);
    std::printf("  C = %.4f: %s, %ld steps, mass change %.2e\n", c,
                mzk::to_string(traj.outcome).c_str(), traj.steps, drift);
    return traj.outcome == mzk::Outcome::completed && drift < 1e-2;
  };

  double lo = 0.25, hi = 2.0;
  if (!stable(lo) || stable(hi)) {
    std::puts("bracket [0.25, 2] does not straddle the stability limit");
    return 1;
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  std::printf("largest stable C ~ %.3f, default (halved) %.3f\n", lo, 0.5 * lo);
  return 0;
}
