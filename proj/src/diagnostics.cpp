#include "mzk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mzk/errors.hpp"
#include "mzk/spectral.hpp"

namespace mzk {

double mass(const Field2D& u) { return u.grid().cell_area() * u.physical().square().sum(); }

double energy(const Field2D& u, double coupling) {
  const double quartic = u.grid().cell_area() * u.physical().square().square().sum();
  return 0.5 * gradient_l2_squared(u) - coupling / 12.0 * quartic;
}

std::array<double, 6> triple_norm_terms(const SpaceTimeSlab& slab, double s) {
  if (slab.size() < 2) throw QuadratureError("triple norm needs at least two time samples");
  const auto& frames = slab.frames();
  const auto& times = slab.times();

  std::vector<double> hs(frames.size()), sup(frames.size());
  std::vector<Field2D> dxs_ux, dys_ux;
  dxs_ux.reserve(frames.size());
  dys_ux.reserve(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    hs[k] = sobolev_norm(frames[k], s);
    sup[k] = linf_norm(frames[k]);
    const Field2D ux = partial_deriv(frames[k], Axis::x);
    dxs_ux.push_back(frac_deriv(ux, s, Axis::x));
    dys_ux.push_back(frac_deriv(ux, s, Axis::y));
  }

  const MixedOrder smoothing{kInf, 2.0, 2.0};
  return {*std::max_element(hs.begin(), hs.end()),
          time_norm(sup, times, 3.0),
          time_norm(sup, times, 9.0 / 4.0),
          mixed_norm(SpaceTimeSlab(times, std::move(dxs_ux)), smoothing),
          mixed_norm(SpaceTimeSlab(times, std::move(dys_ux)), smoothing),
          mixed_norm(slab, {2.0, kInf, kInf})};
}

double triple_norm(const SpaceTimeSlab& slab, double s) {
  const auto terms = triple_norm_terms(slab, s);
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

GnCheck gn_bound_check(const Field2D& u, double q_mass) {
  GnCheck out;
  const double m = mass(u);
  out.applicable = m < q_mass;
  if (!out.applicable) return out;
  out.lhs = gradient_l2_squared(u);
  out.rhs = 2.0 * energy(u) / (1.0 - m / q_mass);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-6) || out.lhs == 0.0;
  return out;
}

std::string to_string(SeriesKind kind) {
  return kind == SeriesKind::hs_norm ? "hs_norm" : "grad_l2";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  double slope_stderr = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  if (x.size() > 2 && sxx > 0.0) f.slope_stderr = std::sqrt(ss / (n - 2.0) / sxx);
  return f;
}

}  // namespace

RateFit fit_power_law(std::span<const double> times, std::span<const double> values,
                      std::pair<double, double> window, SeriesKind kind) {
  if (times.size() != values.size()) throw FitError("times and values differ in length");
  std::vector<double> t, logy;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.first || times[i] > window.second) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw FitError("series must be positive and finite on the fitting window");
    t.push_back(times[i]);
    logy.push_back(std::log(values[i]));
  }
  if (t.size() < 3) throw FitError("fewer than three samples in the fitting window");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw FitError("sample times must increase strictly");

  const auto [lo, hi] = std::minmax_element(logy.begin(), logy.end());
  const LineFit trend = least_squares(t, logy);
  if (*hi - *lo < 1e-12 || trend.slope <= 0.0)
    throw FitError("series shows no growth on the fitting window");

  const double t_b = t.back();
  const double span = t_b - t.front();
  std::vector<double> x(t.size());
  auto evaluate = [&](double log_delta) {
    const double t_star = t_b + std::exp(log_delta);
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = -std::log(t_star - t[i]);
    return least_squares(x, logy);
  };

  // Coarse scan, smallest offset first so ties go to the smallest T*.
  const int n_scan = 241;
  const double lo_log = std::log(1e-6 * span), hi_log = std::log(10.0 * span);
  const double step = (hi_log - lo_log) / (n_scan - 1);
  int best = 0;
  double best_rms = evaluate(lo_log).rms;
  for (int k = 1; k < n_scan; ++k) {
    const double r = evaluate(lo_log + k * step).rms;
    if (r < best_rms) {
      best_rms = r;
      best = k;
    }
  }

  // Golden section on the bracket around the best scan point.
  double a = lo_log + std::max(best - 1, 0) * step;
  double b = lo_log + std::min(best + 1, n_scan - 1) * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = evaluate(c).rms, fd = evaluate(d).rms;
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = evaluate(c).rms;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = evaluate(d).rms;
    }
  }
  double log_delta = 0.5 * (a + b);
  if (evaluate(log_delta).rms > best_rms) log_delta = lo_log + best * step;

  // Comparing residuals pins the minimum only to about sqrt(eps). Bisecting
  // on the sign of the residual's derivative pins it to about eps, which keeps
  // the fit equivariant under rescaling of the series.
  auto slope_of_ssr = [&](double ld) {
    const double t_star = t_b + std::exp(ld);
    const auto n = static_cast<double>(t.size());
    std::vector<double> dx(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      x[i] = -std::log(t_star - t[i]);
      dx[i] = -std::exp(ld) / (t_star - t[i]);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double mdx = std::accumulate(dx.begin(), dx.end(), 0.0) / n;
    const double my = std::accumulate(logy.begin(), logy.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, dsxx = 0.0, dsxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double cx = x[i] - mx, cdx = dx[i] - mdx, cy = logy[i] - my;
      sxx += cx * cx;
      sxy += cx * cy;
      dsxx += 2.0 * cx * cdx;
      dsxy += cdx * cy;
    }
    return -2.0 * sxy * dsxy / sxx + sxy * sxy * dsxx / (sxx * sxx);
  };
  double lo_b = lo_log + std::max(best - 1, 0) * step;
  double hi_b = lo_log + std::min(best + 1, n_scan - 1) * step;
  if (slope_of_ssr(lo_b) < 0.0 && slope_of_ssr(hi_b) > 0.0) {
    for (int it = 0; it < 200 && hi_b - lo_b > 4e-16 * std::abs(hi_b); ++it) {
      const double mid = 0.5 * (lo_b + hi_b);
      (slope_of_ssr(mid) < 0.0 ? lo_b : hi_b) = mid;
    }
    const double polished = 0.5 * (lo_b + hi_b);
    if (evaluate(polished).rms <= evaluate(log_delta).rms * (1.0 + 1e-12)) log_delta = polished;
  }

  const LineFit fit = evaluate(log_delta);
  RateFit out;
  out.t_star = t_b + std::exp(log_delta);
  out.rho = fit.slope;
  out.rho_stderr = fit.slope_stderr;
  out.amplitude = std::exp(fit.intercept);
  out.residual = fit.rms;
  out.window = {t.front(), t_b};
  out.series_kind = kind;
  out.points = static_cast<int>(t.size());
  return out;
}

std::pair<double, double> default_fit_window(std::span<const double> times,
                                             std::span<const double> values) {
  if (times.empty()) throw FitError("empty series");
  const std::size_t last = times.size() - 1;
  for (std::size_t i = last; i-- > 0;)
    if (values[i] > 0.0 && values[last] >= 10.0 * values[i]) return {times[i], times[last]};
  return {times.front(), times[last]};
}

RateFit fit_blowup_rate(const Trajectory& traj, SeriesKind kind,
                        std::optional<std::pair<double, double>> window) {
  const auto& series = kind == SeriesKind::hs_norm ? traj.hs_norm : traj.grad_l2;
  const auto w = window ? *window : default_fit_window(traj.times, series);
  return fit_power_law(traj.times, series, w, kind);
}

std::vector<std::pair<std::string, double>> reference_distances(double rho) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& r : kReferenceRates) out.emplace_back(r.label, rho - r.value);
  return out;
}

}  // namespace mzk
