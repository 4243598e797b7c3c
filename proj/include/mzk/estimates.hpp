#pragma once

#include <cstdint>
#include <optional>
#include <ratio>
#include <string>
#include <utility>
#include <vector>

#include "mzk/diagnostics.hpp"
#include "mzk/evolution.hpp"
#include "mzk/field.hpp"

namespace mzk {

// ---------------------------------------------------------------------------
// Kernel envelope H_{k,T}(x) = sup_{|t| <= T, y} |J(t, x, y)|.

struct EnvelopeSweep {
  std::vector<int> levels;
  std::vector<double> horizons;
  /// integrals[l][h] = int_{x >= 0} H_{k_l, T_h}(x) dx.
  std::vector<std::vector<double>> integrals;
  /// d log(integral) / d log T, one per level.
  std::vector<double> t_slopes;
  /// d log2(integral) / dk, one per horizon; empty with a single level.
  std::vector<double> k_slopes;
  double fitted_T_slope = 0.0;                // max of t_slopes
  std::optional<double> fitted_k_slope;       // max of k_slopes
};

/// For every level k and horizon T, samples |J| at n_time_samples uniform
/// times in [0, T] (plus the nodes of every shorter horizon, so the integrals
/// are nondecreasing in T) with a = b = 2^{k+1}, takes the supremum over t and y,
/// symmetrizes by max over +-x and integrates over x in [0, P/2) with a
/// Riemann sum. Negative times are covered by |J(-t, x, y)| = |J(t, -x, -y)|.
///
/// Horizons must lie in [1, 32] (DomainError); fewer than two horizons is a
/// FitError. Resolution errors come from the kernel evaluator.
EnvelopeSweep envelope_sweep(const std::vector<int>& levels, const std::vector<double>& horizons,
                             const SpectralGrid& grid, int n_time_samples, int threads = 1);

// ---------------------------------------------------------------------------
// Smoothing ratio ||U(t) u0||_{L^2_x L^inf_{yT}} / ||u0||_{H^s}.

struct SmoothingSweep {
  int ensemble_size = 0;
  double s = 0.0;
  std::vector<double> horizons;
  /// ratios[m][h] for ensemble member m and horizon h.
  std::vector<std::vector<double>> ratios;
  double sup_constant = 0.0;  // max ratio / T^{1/8}
};

/// Random real field with independent Gaussian spectral coefficients on the
/// modes max(|xi|, |eta|) <= band, scaled to unit H^s norm. Deterministic in
/// (grid, band, s, seed).
Field2D random_band_limited(const SpectralGrid& grid, double band, double s, std::uint64_t seed);

/// ||U(t) u0||_{L^2_x L^inf_{yT}} for each horizon. Horizons are processed in
/// increasing order and each window's time nodes include those of all
/// shorter windows, so the result is nondecreasing in T exactly.
std::vector<double> smoothing_norms(const Field2D& u0, const std::vector<double>& horizons,
                                    int n_time_samples);

SmoothingSweep smoothing_sweep(double s, int ensemble_size, const std::vector<double>& horizons,
                               const SpectralGrid& grid, int n_time_samples, double band,
                               std::uint64_t seed, int threads = 1);

/// sup_constant restricted to the listed ensemble members.
double sup_constant_of(const SmoothingSweep& sweep, const std::vector<int>& members);

// ---------------------------------------------------------------------------
// Two-term contraction bound shape for the first Picard iterate.

struct ProbeRow {
  double T = 0.0;
  double iterate_norm = 0.0;  // triple norm of Psi(U(t) u0) on [0, T]
  double linear_norm = 0.0;   // triple norm of U(t) u0 on [0, T]
  double bound = 0.0;         // A T^{1/8} + B T^{1/8 + 1/6} linear_norm^3
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  double A = 0.0;
  double B = 0.0;
  bool covers = true;
};

/// A and B are fitted at the smallest horizon T0:
///   A = linear_norm(T0) / T0^{1/8},
///   B = max(0, iterate_norm(T0) - A T0^{1/8}) / (T0^{7/24} linear_norm(T0)^3),
/// and `covers` reports whether iterate_norm <= bound (with 1e-12 relative
/// slack) at every horizon. A zero u0 gives an all-zero table with A = B = 0.
ProbeTable triple_norm_power_probe(const Field2D& u0, double s, const std::vector<double>& horizons,
                                   int n_time_samples, double coupling = kStandardCoupling,
                                   bool dealias = true);

// ---------------------------------------------------------------------------
// Local existence time and the resulting rate.

/// Which smallness condition fixes the local time. `ball_free` takes the ball
/// radius M = 2 c(s) ||u||_{H^s}; `ball_scaled` takes M = 2 c(s) T^{1/8} ||u||.
enum class LwpVariant { ball_free, ball_scaled };
std::string to_string(LwpVariant v);

/// Exponent of T in the smallness condition c(s) T^e M^2 < 1/4 after M is
/// substituted: 1/8 + 1/6 = 7/24, or 7/24 + 1/4 = 13/24 for ball_scaled.
using LwpExponentBallFree = std::ratio_add<std::ratio<1, 8>, std::ratio<1, 6>>;
using LwpExponentBallScaled = std::ratio_add<LwpExponentBallFree, std::ratio<1, 4>>;
/// The rate is half the exponent: ||u|| >~ (T* - t)^{-e/2}.
using RateBallFree = std::ratio_divide<LwpExponentBallFree, std::ratio<2>>;
using RateBallScaled = std::ratio_divide<LwpExponentBallScaled, std::ratio<2>>;

double lwp_exponent(LwpVariant v);
double rate_exponent(LwpVariant v);

/// T_loc solving c_s T^e (2 c_s norm_hs)^2 = 1/4, that is
/// (16 c_s^3 norm_hs^2)^{-1/e}. Returns nullopt when norm_hs == 0 (no
/// lifespan bound). Throws DomainError for negative norm or non-positive c_s.
std::optional<double> lwp_time_probe(double norm_hs, double c_s,
                                     LwpVariant variant = LwpVariant::ball_free);

struct RateAlgebra {
  double c_s = 1.0;
  double norm = 0.0;
  std::optional<double> T_loc;
  double rho_min = 7.0 / 48.0;
  LwpVariant variant = LwpVariant::ball_free;

  /// Lower bound on ||u(t)||_{H^s} implied when T* - t = tau:
  /// (16 c_s^3)^{-1/2} tau^{-rho}.
  double norm_lower_bound(double tau) const;
};

RateAlgebra make_rate_algebra(double c_s, double norm_hs,
                              LwpVariant variant = LwpVariant::ball_free);

// ---------------------------------------------------------------------------

enum class RateCheckStatus { passes, fails, not_applicable };
std::string to_string(RateCheckStatus s);

struct RateCheckReport {
  RateCheckStatus status = RateCheckStatus::not_applicable;
  double rho = 0.0;
  double rho_min = 7.0 / 48.0;
  double uncertainty = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::vector<std::pair<std::string, double>> distances;
};

/// passes iff rho >= 7/48 - rho_stderr. Trajectories that did not flag a
/// blow-up are not_applicable.
RateCheckReport rate_bound_check(const Trajectory& traj, const RateFit& fit);
/// Same test on a fit alone, treating it as applicable.
RateCheckReport rate_bound_check(const RateFit& fit);

}  // namespace mzk
