#include "mzk/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mzk/errors.hpp"
#include "mzk/fft.hpp"
#include "mzk/parallel.hpp"
#include "mzk/propagator.hpp"
#include "mzk/spectral.hpp"

namespace mzk {

namespace {

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

std::vector<double> uniform_nodes(double T, int n) {
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = (j == n - 1) ? T : T * j / (n - 1);
  return t;
}

// Integral over x in [0, P/2) of max(H(x), H(-x)), for H in centred layout.
double half_line_integral(const Eigen::ArrayXd& h, double dx) {
  const auto n = static_cast<int>(h.size());
  double acc = 0.0;
  for (int i = n / 2; i < n; ++i) acc += std::max(h[i], h[n - i]);
  return acc * dx;
}

}  // namespace

EnvelopeSweep envelope_sweep(const std::vector<int>& levels, const std::vector<double>& horizons,
                             const SpectralGrid& grid, int n_time_samples, int threads) {
  if (levels.empty()) throw DomainError("envelope sweep needs at least one level");
  if (horizons.size() < 2) throw FitError("envelope T-slope needs at least two horizons");
  for (double T : horizons)
    if (!(T >= 1.0 && T <= 32.0)) throw DomainError("envelope horizons must lie in [1, 32]");
  if (n_time_samples < 2) throw DomainError("envelope sweep needs at least two time samples");
  for (int k : levels) {
    if (k < 0) throw DomainError("dyadic level must be >= 0");
    const double a = std::ldexp(1.0, k + 1);
    require_kernel_resolution(k, grid, a, a);
  }

  EnvelopeSweep out;
  out.levels = levels;
  out.horizons = horizons;
  const int n_l = static_cast<int>(levels.size()), n_h = static_cast<int>(horizons.size());
  out.integrals.assign(n_l, std::vector<double>(n_h, 0.0));

  // Horizons are visited in increasing order and the sup over t accumulates,
  // so every window also contains the time nodes of the shorter ones and the
  // integrals are nondecreasing in T on the discrete data.
  std::vector<int> order(n_h);
  for (int h = 0; h < n_h; ++h) order[h] = h;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return horizons[a] < horizons[b]; });

  parallel_for(n_l, threads, [&](int l) {
    const int k = levels[l];
    const double a = std::ldexp(1.0, k + 1);
    Eigen::ArrayXd envelope = Eigen::ArrayXd::Zero(grid.n_x());
    for (int h : order) {
      for (double t : uniform_nodes(horizons[h], n_time_samples)) {
        const ComplexArray j = kernel_field(k, t, grid, a, a);
        envelope = envelope.max(j.abs().rowwise().maxCoeff());
      }
      out.integrals[l][h] = half_line_integral(envelope, grid.dx());
    }
  });

  std::vector<double> log_t(n_h);
  for (int h = 0; h < n_h; ++h) log_t[h] = std::log(horizons[h]);
  for (int l = 0; l < n_l; ++l) {
    std::vector<double> log_i(n_h);
    for (int h = 0; h < n_h; ++h) log_i[h] = std::log(out.integrals[l][h]);
    out.t_slopes.push_back(ols_slope(log_t, log_i));
  }
  out.fitted_T_slope = *std::max_element(out.t_slopes.begin(), out.t_slopes.end());

  if (n_l >= 2) {
    std::vector<double> ks(levels.begin(), levels.end());
    for (int h = 0; h < n_h; ++h) {
      std::vector<double> log2_i(n_l);
      for (int l = 0; l < n_l; ++l) log2_i[l] = std::log2(out.integrals[l][h]);
      out.k_slopes.push_back(ols_slope(ks, log2_i));
    }
    out.fitted_k_slope = *std::max_element(out.k_slopes.begin(), out.k_slopes.end());
  }
  return out;
}

Field2D random_band_limited(const SpectralGrid& grid, double band, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexArray spectrum = ComplexArray::Zero(grid.n_x(), grid.n_y_half());
  for (int i = 0; i < grid.n_x(); ++i)
    for (int j = 0; j < grid.n_y_half(); ++j) {
      const double re = normal(rng), im = normal(rng);
      if (grid.is_nyquist_x(i) || grid.is_nyquist_y(j)) continue;
      if (std::max(std::abs(grid.wavenumbers_x()[i]), std::abs(grid.wavenumbers_y()[j])) > band)
        continue;
      spectrum(i, j) = Complex(re, im);
    }
  const Field2D raw = Field2D::from_spectrum(grid, spectrum);
  const double norm = sobolev_norm(raw, s);
  if (norm == 0.0) throw DomainError("band contains no resolved modes");
  return (1.0 / norm) * raw;
}

std::vector<double> smoothing_norms(const Field2D& u0, const std::vector<double>& horizons,
                                    int n_time_samples) {
  if (n_time_samples < 2) throw DomainError("smoothing norms need at least two time samples");
  const SpectralGrid& grid = u0.grid();
  std::vector<int> order(horizons.size());
  for (std::size_t h = 0; h < order.size(); ++h) order[h] = static_cast<int>(h);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return horizons[a] < horizons[b]; });

  std::vector<double> out(horizons.size());
  Eigen::ArrayXd sup_yt = u0.physical().abs().rowwise().maxCoeff();
  for (int h : order) {
    if (!(horizons[h] > 0.0)) throw DomainError("horizons must be > 0");
    for (double t : uniform_nodes(horizons[h], n_time_samples)) {
      const RealArray frame = fft::inverse(group_multiplier(grid, t) * u0.spectral(), grid.n_y());
      sup_yt = sup_yt.max(frame.abs().rowwise().maxCoeff());
    }
    out[h] = std::sqrt(grid.dx() * sup_yt.square().sum());
  }
  return out;
}

SmoothingSweep smoothing_sweep(double s, int ensemble_size, const std::vector<double>& horizons,
                               const SpectralGrid& grid, int n_time_samples, double band,
                               std::uint64_t seed, int threads) {
  if (!(s > 0.75)) throw DomainError("smoothing sweep needs s > 3/4");
  if (ensemble_size < 1) throw DomainError("ensemble_size must be >= 1");
  if (horizons.empty()) throw DomainError("smoothing sweep needs at least one horizon");

  SmoothingSweep out;
  out.ensemble_size = ensemble_size;
  out.s = s;
  out.horizons = horizons;
  out.ratios.assign(ensemble_size, {});
  parallel_for(ensemble_size, threads, [&](int m) {
    const Field2D u0 = random_band_limited(grid, band, s, seed + static_cast<std::uint64_t>(m));
    const double norm = sobolev_norm(u0, s);
    auto r = smoothing_norms(u0, horizons, n_time_samples);
    for (double& v : r) v /= norm;
    out.ratios[m] = std::move(r);
  });
  std::vector<int> all(ensemble_size);
  for (int m = 0; m < ensemble_size; ++m) all[m] = m;
  out.sup_constant = sup_constant_of(out, all);
  return out;
}

double sup_constant_of(const SmoothingSweep& sweep, const std::vector<int>& members) {
  double best = 0.0;
  for (int m : members)
    for (std::size_t h = 0; h < sweep.horizons.size(); ++h)
      best = std::max(best, sweep.ratios.at(m)[h] / std::pow(sweep.horizons[h], 0.125));
  return best;
}

ProbeTable triple_norm_power_probe(const Field2D& u0, double s, const std::vector<double>& horizons,
                                   int n_time_samples, double coupling, bool dealias) {
  if (horizons.empty()) throw DomainError("probe needs at least one horizon");
  std::vector<double> sorted = horizons;
  std::sort(sorted.begin(), sorted.end());

  ProbeTable table;
  for (double T : sorted) {
    const PicardResult picard = picard_iterate(u0, T, 1, n_time_samples, coupling, dealias);
    std::vector<Field2D> linear;
    for (double t : picard.slab.times()) linear.push_back(apply_group(u0, t));
    ProbeRow row;
    row.T = T;
    row.iterate_norm = triple_norm(picard.slab, s);
    row.linear_norm = triple_norm(SpaceTimeSlab(picard.slab.times(), std::move(linear)), s);
    table.rows.push_back(row);
  }

  const ProbeRow& first = table.rows.front();
  if (first.linear_norm > 0.0) {
    table.A = first.linear_norm / std::pow(first.T, 0.125);
    const double excess = std::max(0.0, first.iterate_norm - table.A * std::pow(first.T, 0.125));
    table.B = excess / (std::pow(first.T, 7.0 / 24.0) * std::pow(first.linear_norm, 3));
  }
  for (auto& row : table.rows) {
    row.bound = table.A * std::pow(row.T, 0.125) +
                table.B * std::pow(row.T, 7.0 / 24.0) * std::pow(row.linear_norm, 3);
    if (row.iterate_norm > row.bound * (1.0 + 1e-12)) table.covers = false;
  }
  return table;
}

std::string to_string(LwpVariant v) {
  return v == LwpVariant::ball_free ? "ball_free" : "ball_scaled";
}

double lwp_exponent(LwpVariant v) {
  using F = LwpExponentBallFree;
  using S = LwpExponentBallScaled;
  return v == LwpVariant::ball_free ? static_cast<double>(F::num) / F::den
                                    : static_cast<double>(S::num) / S::den;
}

double rate_exponent(LwpVariant v) { return 0.5 * lwp_exponent(v); }

std::optional<double> lwp_time_probe(double norm_hs, double c_s, LwpVariant variant) {
  if (!(c_s > 0.0) || !std::isfinite(c_s)) throw DomainError("c(s) must be positive");
  if (!(norm_hs >= 0.0) || !std::isfinite(norm_hs)) throw DomainError("norm must be >= 0");
  if (norm_hs == 0.0) return std::nullopt;
  return std::pow(16.0 * c_s * c_s * c_s * norm_hs * norm_hs, -1.0 / lwp_exponent(variant));
}

double RateAlgebra::norm_lower_bound(double tau) const {
  return std::pow(16.0 * c_s * c_s * c_s, -0.5) * std::pow(tau, -rate_exponent(variant));
}

RateAlgebra make_rate_algebra(double c_s, double norm_hs, LwpVariant variant) {
  RateAlgebra r;
  r.c_s = c_s;
  r.norm = norm_hs;
  r.variant = variant;
  r.T_loc = lwp_time_probe(norm_hs, c_s, variant);
  return r;
}

std::string to_string(RateCheckStatus s) {
  switch (s) {
    case RateCheckStatus::passes: return "passes";
    case RateCheckStatus::fails: return "fails";
    case RateCheckStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

RateCheckReport rate_bound_check(const RateFit& fit) {
  RateCheckReport r;
  r.rho = fit.rho;
  r.uncertainty = fit.rho_stderr;
  r.window = fit.window;
  r.status = fit.rho >= r.rho_min - r.uncertainty ? RateCheckStatus::passes : RateCheckStatus::fails;
  r.distances = reference_distances(fit.rho);
  return r;
}

RateCheckReport rate_bound_check(const Trajectory& traj, const RateFit& fit) {
  RateCheckReport r = rate_bound_check(fit);
  if (traj.outcome != Outcome::blowup_detected) r.status = RateCheckStatus::not_applicable;
  return r;
}

}  // namespace mzk
