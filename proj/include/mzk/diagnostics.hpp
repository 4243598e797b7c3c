#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mzk/evolution.hpp"
#include "mzk/field.hpp"

namespace mzk {

/// M[u] = dx dy sum u^2.
double mass(const Field2D& u);

/// E[u] = 1/2 int |grad u|^2 - (kappa/12) int u^4, the Hamiltonian of
/// u_t + d_x Laplacian(u) + kappa u^2 u_x = 0. The default coupling gives
/// the usual 1/2 int |grad u|^2 - 1/4 int u^4.
double energy(const Field2D& u, double coupling = kStandardCoupling);

/// The six summands of the local-theory norm, in order:
///   ||u||_{L^inf_T H^s}, ||u||_{L^3_T L^inf_xy}, ||u||_{L^{9/4}_T L^inf_xy},
///   ||D^s_x u_x||_{L^inf_x L^2_yT}, ||D^s_y u_x||_{L^inf_x L^2_yT},
///   ||u||_{L^2_x L^inf_yT}.
std::array<double, 6> triple_norm_terms(const SpaceTimeSlab& slab, double s);
/// Sum of triple_norm_terms. Needs at least two frames (QuadratureError).
double triple_norm(const SpaceTimeSlab& slab, double s);

struct GnCheck {
  bool applicable = false;
  double lhs = 0.0;  // ||grad u||^2
  double rhs = 0.0;  // 2 (1 - M[u]/M[Q])^{-1} E[u]
  bool holds = false;
};

/// Sharp Gagliardo-Nirenberg control of the gradient for sub-threshold mass:
/// int u^4 <= (M[u]/M[Q]) int |grad u|^2, so
/// ||grad u||^2 <= 2 (1 - M[u]/M[Q])^{-1} E[u]. Applicable iff M[u] < q_mass.
GnCheck gn_bound_check(const Field2D& u, double q_mass);

enum class SeriesKind { hs_norm, grad_l2 };
std::string to_string(SeriesKind kind);

struct RateFit {
  double t_star = 0.0;
  double rho = 0.0;
  double rho_stderr = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;  // RMS misfit in log space
  std::pair<double, double> window{0.0, 0.0};
  SeriesKind series_kind = SeriesKind::grad_l2;
  int points = 0;
};

/// Fits y(t) ~ C (T* - t)^{-rho} on the samples with t in [t_a, t_b]: scans
/// log-spaced candidates T* > t_b, solves the log-log least-squares problem
/// for each, then refines the best candidate by golden section on
/// log(T* - t_b). Throws FitError if fewer than three samples fall in the
/// window, any sample is non-positive, or the series shows no net growth.
RateFit fit_power_law(std::span<const double> times, std::span<const double> values,
                      std::pair<double, double> window, SeriesKind kind = SeriesKind::grad_l2);

/// Default fitting window: from the last sample back to the latest sample at
/// least 10x smaller (the last decade of growth), or the whole series when it
/// never grew that much.
std::pair<double, double> default_fit_window(std::span<const double> times,
                                             std::span<const double> values);

RateFit fit_blowup_rate(const Trajectory& traj, SeriesKind kind,
                        std::optional<std::pair<double, double>> window = std::nullopt);

struct ReferenceRate {
  const char* label;
  double value;
};

/// Marked rates of the blow-up literature: the 7/48 lower bound, 1/3, the
/// self-similar 1/2, 5/7, about 0.74 and 5/6.
inline constexpr std::array<ReferenceRate, 6> kReferenceRates{{{"7/48", 7.0 / 48.0},
                                                               {"1/3", 1.0 / 3.0},
                                                               {"1/2", 0.5},
                                                               {"5/7", 5.0 / 7.0},
                                                               {"~0.74", 0.74},
                                                               {"5/6", 5.0 / 6.0}}};

/// rho minus each reference rate, in kReferenceRates order.
std::vector<std::pair<std::string, double>> reference_distances(double rho);

}  // namespace mzk
