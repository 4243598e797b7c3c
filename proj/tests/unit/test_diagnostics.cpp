#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "mzk/diagnostics.hpp"
#include "mzk/errors.hpp"
#include "mzk/groundstate.hpp"
#include "mzk/propagator.hpp"
#include "mzk/spectral.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace mzk;
using std::numbers::pi;

namespace {

const GroundStateResult& reference_q() {
  static const GroundStateResult q = solve_ground_state(1.0, make_grid(256, 256, 40.0, 40.0));
  return q;
}

Trajectory synthetic(const std::vector<double>& t, const std::vector<double>& y) {
  Trajectory traj;
  for (std::size_t i = 0; i < t.size(); ++i) traj.push({t[i], 1.0, 0.0, y[i], y[i], y[i], 1e-3});
  traj.outcome = Outcome::blowup_detected;
  return traj;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("mass and energy") {
  const auto g = make_grid(128, 128, 24.0, 24.0);
  CHECK(mass(Field2D::zeros(g)) == 0.0);
  CHECK(energy(Field2D::zeros(g)) == 0.0);

  const double A = 1.3;
  const auto gauss = Field2D::from_function(g, [&](double x, double y) { return A * std::exp(-(x * x + y * y) / 2); });
  CHECK(helpers::rel(mass(gauss), A * A * pi) < 1e-10);
  // 1/2 |grad|^2 = A^2 pi / 2 and int u^4 = A^4 pi / 2.
  CHECK(helpers::rel(energy(gauss), A * A * pi / 2 - A * A * A * A * pi / 8) < 1e-10);
  CHECK(helpers::rel(energy(gauss, 1.0), A * A * pi / 2 - A * A * A * A * pi / 24) < 1e-10);

  for (double t : {0.3, 2.0, -5.0}) CHECK(helpers::rel(mass(apply_group(gauss, t)), mass(gauss)) < 1e-12);

  const auto& q = reference_q();
  CHECK(std::abs(energy(q.field)) <= 1e-6 * q.mass);
  for (double lambda : {0.5, 1.2}) {
    const double expected = 0.5 * (lambda * lambda - std::pow(lambda, 4)) * q.mass;
    CHECK(std::abs(energy(lambda * q.field) - expected) <= 1e-6 * q.mass);
  }
  CHECK(energy(1.2 * q.field) < 0.0);
}

TEST_CASE("property: periodic shifts leave mass, energy and H^s unchanged") {
  gen::for_all("shift invariance", 20, 71, [](gen::Gen& gg) {
    const auto g = gg.grid();
    const auto u = gg.band_limited(g, 3.0);
    const auto v = roll(u, gg.integer(-g.n_x(), g.n_x()), gg.integer(-g.n_y(), g.n_y()));
    const double s = gg.uniform(0.0, 2.0);
    CHECK(helpers::rel(mass(v), mass(u)) < 1e-12);
    CHECK(std::abs(energy(v) - energy(u)) <= 1e-12 * (std::abs(energy(u)) + gradient_l2_squared(u)));
    CHECK(helpers::rel(sobolev_norm(v, s), sobolev_norm(u, s)) < 1e-12);
  });
}

TEST_CASE("triple norm") {
  SUBCASE("hand fixture: a(t) cos x on a 16 x 16 grid of period 2 pi") {
    // a = 1 at t = 0 and a = 2 at t = 1; every term has a closed form and the
    // Riemann sums are exact for these trigonometric polynomials.
    const auto g = make_grid(16, 16, 2 * pi, 2 * pi);
    const auto c = Field2D::from_function(g, [](double x, double) { return std::cos(x); });
    const SpaceTimeSlab slab({0.0, 1.0}, {c, 2.0 * c});
    const double s = 0.8;
    const auto terms = triple_norm_terms(slab, s);
    const std::array<double, 6> expected{2.0 * std::sqrt(2.0) * pi * std::pow(2.0, s / 2),
                                         std::cbrt(4.5),
                                         std::pow((1.0 + std::pow(2.0, 2.25)) / 2.0, 4.0 / 9.0),
                                         std::sqrt(5.0 * pi),
                                         0.0,
                                         2.0 * std::sqrt(pi)};
    for (int i = 0; i < 6; ++i) {
      INFO("term " << i);
      CHECK(terms[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    CHECK(terms[4] < 1e-13);
    double sum = 0.0;
    for (double e : expected) sum += e;
    CHECK(triple_norm(slab, s) == doctest::Approx(sum).epsilon(1e-12));
  }
  SUBCASE("zero slab and degenerate slab") {
    const auto g = make_grid(16, 16, 5.0, 5.0);
    const SpaceTimeSlab zero({0.0, 0.5, 1.0}, {Field2D::zeros(g), Field2D::zeros(g), Field2D::zeros(g)});
    CHECK(triple_norm(zero, 0.9) == 0.0);
    CHECK_THROWS_AS(triple_norm(SpaceTimeSlab({0.0}, {Field2D::zeros(g)}), 0.9), QuadratureError);
  }
  SUBCASE("property: group slab keeps the first term and dominates every summand") {
    gen::for_all("group slab", 10, 73, [](gen::Gen& gg) {
      const auto g = gg.grid();
      const auto u0 = gg.band_limited(g, 3.0);
      const double s = gg.uniform(0.76, 1.5);
      std::vector<double> times{0.0};
      std::vector<Field2D> frames{u0};
      for (int k = 1; k < 6; ++k) {
        times.push_back(times.back() + gg.uniform(0.01, 0.3));
        frames.push_back(apply_group(u0, times.back()));
      }
      const SpaceTimeSlab slab(times, frames);
      const auto terms = triple_norm_terms(slab, s);
      CHECK(helpers::rel(terms[0], sobolev_norm(u0, s)) < 1e-10);
      const double total = triple_norm(slab, s);
      for (double t : terms) {
        CHECK(t >= 0.0);
        CHECK(total >= t);
      }
    });
  }
}

TEST_CASE("Gagliardo-Nirenberg check") {
  const auto& q = reference_q();
  const auto zero = gn_bound_check(Field2D::zeros(q.field.grid()), q.mass);
  CHECK(zero.applicable);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.holds);

  // lambda Q is the extremal case: both sides equal lambda^2 M[Q].
  const auto half = gn_bound_check(0.5 * q.field, q.mass);
  CHECK(half.applicable);
  CHECK(half.holds);
  CHECK(half.lhs == doctest::Approx(0.25 * q.mass).epsilon(1e-6));
  CHECK(half.rhs == doctest::Approx(0.25 * q.mass).epsilon(1e-6));

  const auto over = gn_bound_check(1.5 * q.field, q.mass);
  CHECK_FALSE(over.applicable);
  CHECK_FALSE(over.holds);

  gen::for_all("tiny mass", 10, 79, [&](gen::Gen& gg) {
    const auto g = make_grid(64, 64, 20.0, 20.0);
    auto u = gg.band_limited(g, 2.0);
    u = std::sqrt(gg.uniform(0.001, 0.01) * q.mass / mass(u)) * u;
    const auto r = gn_bound_check(u, q.mass);
    CHECK(r.applicable);
    CHECK(r.holds);
    CHECK(std::abs(r.rhs - 2.0 * energy(u)) <= 0.02 * 2.0 * energy(u));
  });
}

TEST_CASE("power-law fitter") {
  SUBCASE("exact model") {
    const auto t = linspace(0.0, 0.9, 91);
    std::vector<double> y;
    for (double ti : t) y.push_back(std::pow(1.0 - ti, -0.5));
    const auto fit = fit_power_law(t, y, {0.0, 0.9});
    CHECK(std::abs(fit.t_star - 1.0) <= 1e-4);
    CHECK(std::abs(fit.rho - 0.5) <= 0.005);
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(fit.residual >= 0.0);
    CHECK(fit.t_star > fit.window.second);
    CHECK(fit.points == 91);
    CHECK(fit.series_kind == SeriesKind::grad_l2);
  }
  SUBCASE("one percent noise at rate 5/7") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01);
    const auto t = linspace(0.0, 0.95, 200);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> y;
      for (double ti : t) y.push_back(3.0 * std::pow(1.0 - ti, -5.0 / 7.0) * (1.0 + noise(rng)));
      const auto fit = fit_power_law(t, y, {0.0, 0.95});
      CHECK(std::abs(fit.rho - 5.0 / 7.0) <= 0.02);
    }
  }
  SUBCASE("infeasible series") {
    const auto t = linspace(0.0, 1.0, 20);
    const std::vector<double> flat(20, 2.0);
    CHECK_THROWS_AS(fit_power_law(t, flat, {0.0, 1.0}), FitError);
    std::vector<double> falling, negative;
    for (double ti : t) {
      falling.push_back(1.0 / (1.0 + ti));
      negative.push_back(ti - 0.5);
    }
    CHECK_THROWS_AS(fit_power_law(t, falling, {0.0, 1.0}), FitError);
    CHECK_THROWS_AS(fit_power_law(t, negative, {0.0, 1.0}), FitError);
    CHECK_THROWS_AS(fit_power_law(t, falling, {0.0, 0.05}), FitError);  // two points
  }
  SUBCASE("trajectory wrapper and default window") {
    const auto t = linspace(0.0, 0.999, 400);
    std::vector<double> y;
    for (double ti : t) y.push_back(std::pow(1.0 - ti, -1.0 / 3.0));
    const auto traj = synthetic(t, y);
    const auto w = default_fit_window(traj.times, traj.grad_l2);
    CHECK(traj.grad_l2.back() >= 10.0 * std::pow(1.0 - w.first, -1.0 / 3.0) * (1 - 1e-12));
    const auto fit = fit_blowup_rate(traj, SeriesKind::hs_norm);
    CHECK(fit.series_kind == SeriesKind::hs_norm);
    CHECK(std::abs(fit.rho - 1.0 / 3.0) <= 0.005);
    CHECK(fit.window.first == w.first);
  }
  SUBCASE("property: scaling the series only scales the amplitude") {
    gen::for_all("fit equivariance", 10, 83, [](gen::Gen& gg) {
      const double rho = gg.uniform(0.1, 1.0), t_star = gg.uniform(1.0, 2.0);
      const auto t = linspace(0.0, 0.9 * t_star, 60);
      std::vector<double> y, scaled;
      const double lambda = std::exp(gg.uniform(-5.0, 5.0));
      for (double ti : t) {
        y.push_back(std::pow(t_star - ti, -rho) * (1.0 + 0.01 * std::sin(7.0 * ti)));
        scaled.push_back(lambda * y.back());
      }
      const auto a = fit_power_law(t, y, {t.front(), t.back()});
      const auto b = fit_power_law(t, scaled, {t.front(), t.back()});
      CHECK(std::abs(b.t_star - a.t_star) <= 1e-10 * a.t_star);
      CHECK(std::abs(b.rho - a.rho) <= 1e-10);
      CHECK(helpers::rel(b.amplitude, lambda * a.amplitude) <= 1e-10);
    });
  }
}

TEST_CASE("reference rates") {
  const auto d = reference_distances(0.5);
  REQUIRE(d.size() == 6);
  CHECK(d[0].first == "7/48");
  CHECK(d[0].second == doctest::Approx(0.5 - 7.0 / 48.0));
  CHECK(d[2].second == 0.0);
  CHECK(d[5].second == doctest::Approx(0.5 - 5.0 / 6.0));
  CHECK(to_string(SeriesKind::hs_norm) == "hs_norm");
}
