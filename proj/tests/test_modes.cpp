#include <cmath>

#include "doctest.h"
#include "nlsub/errors.hpp"
#include "nlsub/modes.hpp"
#include "nlsub/units.hpp"

using namespace nlsub;

namespace {

QuadGrid grid_for(double tau, int max_order, std::size_t n = 801) {
  return QuadGrid::symmetric((8.0 + 2.0 * max_order) / tau, n);
}

}  // namespace

TEST_SUITE("modes") {

TEST_CASE("quadrature grid") {
  const auto g = QuadGrid::uniform(-0.3, 0.5, 101, "x");
  double s = 0.0;
  for (double w : g.weights()) s += w;
  CHECK(std::abs(s - 0.8) < 1e-12 * 0.8);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  for (double w : g.weights()) CHECK(w > 0.0);
  CHECK(g.axis() == "x");

  const auto sym = QuadGrid::symmetric(0.1, 64);
  for (std::size_t i = 0; i < sym.size(); ++i) CHECK(sym[i] == -sym[sym.size() - 1 - i]);
  CHECK_THROWS_AS(QuadGrid::uniform(0.0, 1.0, 1), GridError);
  CHECK_THROWS_AS(QuadGrid::uniform(1.0, 0.0, 10), GridError);
}

TEST_CASE("Gaussian mode: peak and normalization") {
  const double tau = 94.0;
  const auto g = grid_for(tau, 0);
  const auto f = hermite_gauss({0, tau, 0.0}, g);
  CHECK(f[g.size() / 2] == doctest::Approx(std::sqrt(tau / std::sqrt(units::kPi))).epsilon(1e-14));
  CHECK(std::abs(inner_product(f, f, g) - 1.0) < 1e-10);
}

TEST_CASE("odd orders are odd") {
  const auto g = grid_for(50.0, 3);
  for (int n : {1, 3}) {
    const auto f = hermite_gauss({n, 50.0, 0.0}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(f[i] + f[g.size() - 1 - i]) <= 1e-14 * 50.0);
  }
}

TEST_CASE("orthonormality up to order 8") {
  const double tau = 30.0;
  const auto g = grid_for(tau, 8, 1201);
  std::vector<std::vector<double>> hg;
  for (int n = 0; n <= 8; ++n) hg.push_back(hermite_gauss({n, tau, 0.0}, g));
  for (int n = 0; n <= 8; ++n)
    for (int m = 0; m <= 8; ++m) CHECK(std::abs(inner_product(hg[n], hg[m], g) - (n == m ? 1.0 : 0.0)) < 1e-8);

  // HG_3 has no component along HG_0..HG_2.
  double residual = 1.0;
  for (int n = 0; n < 3; ++n) residual -= std::pow(inner_product(hg[n], hg[3], g), 2);
  CHECK(std::abs(residual - 1.0) < 1e-8);
}

TEST_CASE("overlap of Gaussians of different width") {
  const double tau = 40.0;
  const auto g = grid_for(tau, 0, 1001);
  const auto a = hermite_gauss({0, tau, 0.0}, g);
  const auto b = hermite_gauss({0, 2.0 * tau, 0.0}, g);
  CHECK(inner_product(a, b, g) == doctest::Approx(std::sqrt(4.0 / 5.0)).epsilon(1e-10));
}

TEST_CASE("complex inner product is conjugate symmetric") {
  const auto g = grid_for(20.0, 2, 201);
  std::vector<std::complex<double>> f(g.size()), h(g.size());
  const auto a = hermite_gauss({1, 20.0, 0.0}, g);
  const auto b = hermite_gauss({2, 20.0, 0.0}, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = {a[i], 0.3 * b[i]};
    h[i] = {b[i] - a[i], 0.5 * a[i]};
  }
  const auto fg = inner_product(f, h, g);
  const auto gf = inner_product(h, f, g);
  CHECK(std::abs(fg - std::conj(gf)) < 1e-15);
}

TEST_CASE("grid refinement leaves inner products unchanged") {
  const double tau = 60.0;
  const auto coarse = QuadGrid::symmetric(12.0 / tau, 201);
  const auto fine = QuadGrid::symmetric(12.0 / tau, 401);
  auto ip = [&](const QuadGrid& g) {
    return inner_product(hermite_gauss({0, tau, 0.0}, g), hermite_gauss({2, 1.3 * tau, 0.0}, g), g);
  };
  CHECK(std::abs(ip(coarse) - ip(fine)) < 1e-9);
}

TEST_CASE("inadequate span and mismatched grids are errors") {
  const auto narrow = QuadGrid::symmetric(1.0 / 94.0, 64);
  CHECK_THROWS_AS(hermite_gauss({0, 94.0, 0.0}, narrow), GridError);
  const auto g = grid_for(94.0, 0, 64);
  const auto f = hermite_gauss({0, 94.0, 0.0}, g);
  const std::vector<double> shorter(10, 0.0);
  CHECK_THROWS_AS(inner_product(f, shorter, g), ShapeError);
  CHECK_THROWS_AS((HermiteGaussSpec{-1, 1.0, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((HermiteGaussSpec{0, 0.0, 0.0}.validate()), DomainError);
}

TEST_CASE("high orders stay finite") {
  CHECK(std::isfinite(hermite_function(150, 3.0)));
  CHECK(std::isfinite(hermite_function(150, 20.0)));
}

}
