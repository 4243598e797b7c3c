#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "mzk/errors.hpp"
#include "mzk/fft.hpp"
#include "mzk/propagator.hpp"
#include "mzk/spectral.hpp"
#include "oracles/dense_dft.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace mzk;
using std::numbers::pi;

TEST_CASE("make_grid builds DFT-ordered wavenumbers") {
  const auto g = make_grid(16, 16, 2 * pi, 2 * pi);
  const std::vector<double> expected{0, 1, 2, 3, 4, 5, 6, 7, -8, -7, -6, -5, -4, -3, -2, -1};
  for (int i = 0; i < 16; ++i) CHECK(g.wavenumbers_x()[i] == doctest::Approx(expected[i]).epsilon(1e-15));

  const auto h = make_grid(16, 16, 4 * pi, 2 * pi);
  CHECK(h.wavenumbers_x()[1] == doctest::Approx(0.5));
  CHECK(h.wavenumbers_x()[2] == doctest::Approx(1.0));
  CHECK(h.dx() == doctest::Approx(4 * pi / 16));

  CHECK_THROWS_AS(make_grid(10, 16, 2 * pi, 2 * pi), ConfigurationError);
  CHECK_THROWS_AS(make_grid(8, 16, 2 * pi, 2 * pi), ConfigurationError);
  CHECK_THROWS_AS(make_grid(16, 16, 0.0, 2 * pi), ConfigurationError);
  CHECK_THROWS_AS(make_grid(16, 16, 2 * pi, -1.0), ConfigurationError);
}

TEST_CASE("wavenumber tables are antisymmetric apart from Nyquist") {
  gen::for_all("antisymmetry", 10, 11, [](gen::Gen& g) {
    const auto grid = g.grid();
    const auto& k = grid.wavenumbers_x();
    const int n = grid.n_x();
    for (int j = 1; j < n; ++j)
      if (j != n / 2) CHECK(k[j] == -k[n - j]);
  });
}

TEST_CASE("frac_deriv") {
  const auto g = make_grid(32, 32, 2 * pi, 2 * pi);
  const auto s3 = Field2D::from_function(g, [](double x, double) { return std::sin(3 * x); });

  SUBCASE("alpha = 0 is the identity") {
    CHECK(helpers::max_abs_diff(frac_deriv(s3, 0.0, Axis::x), s3) < 1e-14);
  }
  SUBCASE("single mode picks up |3|^s") {
    for (double s : {0.5, 0.8, 1.7}) {
      const auto d = frac_deriv(s3, s, Axis::x);
      CHECK(helpers::max_abs_diff(d, std::pow(3.0, s) * s3) < 1e-12);
      CHECK(helpers::max_abs_diff(frac_deriv(s3, s, Axis::y), Field2D::zeros(g)) < 1e-14);
    }
  }
  SUBCASE("Gaussian matches the dense DFT oracle") {
    const auto h = make_grid(32, 32, 12.0, 10.0);
    const auto f = Field2D::from_function(h, [](double x, double y) { return std::exp(-(x * x + 2 * y * y) / 2); });
    for (int axis : {0, 1}) {
      const auto ours = frac_deriv(f, 0.75, axis == 0 ? Axis::x : Axis::y);
      const auto ref = oracle::dense_frac_deriv(f.physical(), 12.0, 10.0, 0.75, axis);
      CHECK((ours.physical() - ref).abs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("negative alpha is rejected") { CHECK_THROWS_AS(frac_deriv(s3, -0.5, Axis::x), DomainError); }
}

TEST_CASE("partial_deriv") {
  const auto g = make_grid(64, 64, 2 * pi, 2 * pi);
  const auto s3 = Field2D::from_function(g, [](double x, double) { return std::sin(3 * x); });
  const auto c3 = Field2D::from_function(g, [](double x, double) { return 3 * std::cos(3 * x); });
  CHECK(helpers::max_abs_diff(partial_deriv(s3, Axis::x), c3) < 1e-12);

  const auto constant = Field2D::from_function(g, [](double, double) { return 2.5; });
  CHECK(partial_deriv(constant, Axis::x).physical().abs().maxCoeff() < 1e-14);
  CHECK(partial_deriv(constant, Axis::y).physical().abs().maxCoeff() < 1e-14);

  gen::for_all("mixed partials commute", 20, 3, [](gen::Gen& gg) {
    const auto grid = gg.grid();
    const auto f = gg.band_limited(grid, 3.0);
    const auto xy = partial_deriv(partial_deriv(f, Axis::x), Axis::y);
    const auto yx = partial_deriv(partial_deriv(f, Axis::y), Axis::x);
    CHECK(helpers::max_abs_diff(xy, yx) <= 1e-12 * std::max(1.0, xy.physical().abs().maxCoeff()));
  });
}

TEST_CASE("sobolev_norm") {
  const auto g = make_grid(32, 32, 2 * pi, 2 * pi);
  CHECK(sobolev_norm(Field2D::zeros(g), 0.9) == 0.0);

  // A real single mode: sqrt(2) A cos(x) has L2 norm |A| 2 pi, and its two
  // Fourier partners (+-1, 0) both carry the weight (1 + 1)^{s/2}.
  for (double A : {0.3, -2.0})
    for (double s : {0.0, 0.8, 2.0}) {
      const auto f = Field2D::from_function(g, [&](double x, double) { return std::sqrt(2.0) * A * std::cos(x); });
      CHECK(sobolev_norm(f, s) == doctest::Approx(std::abs(A) * 2 * pi * std::pow(2.0, s / 2)).epsilon(1e-12));
    }

  const auto h = make_grid(64, 64, 20.0, 20.0);
  const auto gauss = Field2D::from_function(h, [](double x, double y) { return std::exp(-(x * x + y * y) / 2); });
  const double l2 = l2_norm(gauss);
  const double gx = l2_norm(partial_deriv(gauss, Axis::x)), gy = l2_norm(partial_deriv(gauss, Axis::y));
  CHECK(helpers::rel(sobolev_norm(gauss, 1.0), std::sqrt(l2 * l2 + gx * gx + gy * gy)) < 1e-10);
  CHECK(helpers::rel(gradient_l2_squared(gauss), gx * gx + gy * gy) < 1e-10);
}

TEST_CASE("mixed_norm") {
  SUBCASE("constant field, order (2, inf, inf)") {
    const double px = 7.0, py = 3.0;
    const auto g = make_grid(16, 32, px, py);
    const auto one = Field2D::from_function(g, [](double, double) { return 1.0; });
    const SpaceTimeSlab slab({0.0, 0.5}, {one, one});
    CHECK(mixed_norm(slab, {2, kInf, kInf}) == doctest::Approx(std::sqrt(px)).epsilon(1e-14));
  }
  SUBCASE("2 x 2 x 2 hand fixture") {
    RealArray f0(2, 2), f1(2, 2);
    f0 << 1, 2, 3, 4;
    f1 << 0, -1, 2, 5;
    const std::vector<RealArray> frames{f0, f1};
    const std::vector<double> times{0.0, 1.0};
    // Trapezoid in t: |f|_{L2_T}^2 = (f0^2 + f1^2) / 2 -> {0.5, 2.5, 6.5, 20.5}.
    CHECK(mixed_norm(frames, times, 0.5, 0.25, {kInf, kInf, 2}) == doctest::Approx(std::sqrt(20.5)).epsilon(1e-15));
    CHECK(mixed_norm(frames, times, 0.5, 0.25, {2, 2, 2}) ==
          doctest::Approx(std::sqrt(0.5 * 0.25 * 30.0)).epsilon(1e-15));
    // sup_t then L2_y then sup_x: rows (1, 2) and (3, 5).
    CHECK(mixed_norm(frames, times, 0.5, 0.25, {kInf, 2, kInf}) ==
          doctest::Approx(std::sqrt(0.25 * (9 + 25))).epsilon(1e-15));
  }
  SUBCASE("group slab, order (2, 2, 2) on [0, 1] equals the L2 norm") {
    gen::Gen gg(5);
    const auto g = make_grid(32, 32, 10.0, 10.0);
    const auto u0 = gg.band_limited(g, 4.0);
    std::vector<double> times{0.0, 0.1, 0.4, 1.0};
    std::vector<Field2D> frames;
    for (double t : times) frames.push_back(apply_group(u0, t));
    CHECK(helpers::rel(mixed_norm(SpaceTimeSlab(times, frames), {2, 2, 2}), l2_norm(u0)) < 1e-10);
    // With the sup in t innermost the norm can only grow.
    CHECK(mixed_norm(SpaceTimeSlab(times, frames), {2, 2, kInf}) >= l2_norm(u0) * (1 - 1e-12));
  }
  SUBCASE("single frame with finite r is degenerate") {
    const auto g = make_grid(16, 16, 1.0, 1.0);
    const SpaceTimeSlab slab({0.0}, {Field2D::zeros(g)});
    CHECK_THROWS_AS(mixed_norm(slab, {2, 2, 2}), QuadratureError);
    CHECK(mixed_norm(slab, {2, 2, kInf}) == 0.0);
  }
}

TEST_CASE("slab invariants") {
  const auto g = make_grid(16, 16, 1.0, 1.0);
  CHECK_THROWS(SpaceTimeSlab({}, {}));
  CHECK_THROWS(SpaceTimeSlab({0.0, 0.0}, {Field2D::zeros(g), Field2D::zeros(g)}));
  CHECK_THROWS(SpaceTimeSlab({-1.0}, {Field2D::zeros(g)}));
  CHECK_THROWS(SpaceTimeSlab({0.0, 1.0}, {Field2D::zeros(g), Field2D::zeros(make_grid(32, 16, 1.0, 1.0))}));
}

TEST_CASE("property: Parseval") {
  gen::for_all("parseval", 30, 17, [](gen::Gen& g) {
    const auto grid = g.grid();
    const auto f = g.band_limited(grid, g.uniform(1.0, 6.0));
    CHECK(helpers::rel(sobolev_norm(f, 0.0), l2_norm(f)) < 1e-12);
  });
}

TEST_CASE("property: fractional derivatives compose") {
  gen::for_all("frac compose", 20, 23, [](gen::Gen& g) {
    const auto grid = g.grid();
    const auto f = g.band_limited(grid, 3.0);
    const double a = g.uniform(0.0, 1.5), b = g.uniform(0.0, 1.5);
    const Axis axis = g.integer(0, 1) ? Axis::x : Axis::y;
    const auto lhs = frac_deriv(frac_deriv(f, a, axis), b, axis);
    const auto rhs = frac_deriv(f, a + b, axis);
    CHECK(helpers::max_abs_diff(lhs, rhs) <= 1e-10 * std::max(1.0, rhs.physical().abs().maxCoeff()));
  });
}

TEST_CASE("property: mixed norms are absolutely homogeneous") {
  const std::vector<MixedOrder> orders{{2, kInf, kInf}, {kInf, 2, 2}, {3, 9.0 / 4, 4}, {2, 2, 2}, {4, kInf, 3}};
  gen::for_all("homogeneity", 15, 29, [&](gen::Gen& g) {
    const auto grid = g.grid();
    std::vector<double> times{0.0};
    std::vector<Field2D> frames{g.band_limited(grid, 3.0)};
    for (int k = 0; k < 3; ++k) {
      times.push_back(times.back() + g.uniform(0.01, 1.0));
      frames.push_back(g.band_limited(grid, 3.0));
    }
    const SpaceTimeSlab slab(times, frames);
    const double lambda = g.uniform(-5.0, 5.0);
    const SpaceTimeSlab scaled = lambda * slab;
    for (const auto& o : orders)
      CHECK(helpers::rel(mixed_norm(scaled, o), std::abs(lambda) * mixed_norm(slab, o)) < 1e-13);
  });
}

TEST_CASE("property: transform round trip") {
  gen::for_all("round trip", 20, 31, [](gen::Gen& g) {
    const auto grid = g.grid();
    RealArray r(grid.n_x(), grid.n_y());
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) r(i, j) = g.normal();
    const RealArray back = fft::inverse(fft::forward(r), grid.n_y());
    CHECK((back - r).abs().maxCoeff() / r.abs().maxCoeff() < 1e-12);
  });
}

TEST_CASE("dealias mask keeps the inner two thirds") {
  const auto g = make_grid(32, 32, 2 * pi, 2 * pi);
  const RealArray m = dealias_mask(g);
  for (int i = 0; i < g.n_x(); ++i)
    for (int j = 0; j < g.n_y_half(); ++j) {
      const bool keep = std::abs(g.wavenumbers_x()[i]) <= 32.0 / 3 && std::abs(g.wavenumbers_y()[j]) <= 32.0 / 3;
      CHECK(m(i, j) == (keep ? 1.0 : 0.0));
    }
}
