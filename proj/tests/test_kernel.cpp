#include <cmath>

#include "doctest.h"
#include "nlsub/errors.hpp"
#include "nlsub/kernel.hpp"
#include "support.hpp"

using namespace nlsub;
using testing::rel;

namespace {

CrystalPreset aligned(double length_um) {
  auto c = testing::bbo(1, Configuration::co, length_um);
  c.phi = 0.0;
  c.rho = 0.0;
  return c;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("value at the origin") {
  const double tau = 94.0, w = 107.7;
  const TransferFunction tf(testing::bbo(), testing::gate(0, tau), testing::signal(w));
  const double expected = std::sqrt(tau) / std::pow(units::kPi, 0.25) * std::sqrt(w) / std::pow(units::kPi, 0.25);
  CHECK(rel(tf(0.0, 0.0, 0.0), expected) < 1e-14);
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(units::kPi) == doctest::Approx(0.0).epsilon(1e-15));
  for (double x : {1e-6, 5e-5, 2e-4, 0.3, 2.0}) CHECK(rel(sinc(x), std::sin(x) / x) < 1e-14);
  CHECK(sinc(-0.7) == sinc(0.7));
}

TEST_CASE("factor arguments") {
  const auto c = testing::bbo(5, Configuration::counter, 3000.0);
  const TransferFunction tf(c, testing::gate(), testing::signal());
  const auto a = tf.arguments(0.011, -0.004, 0.023);
  CHECK(a.gate == doctest::Approx(0.011 - 0.023).epsilon(1e-14));
  const double t = std::tan(c.phi);
  CHECK(a.signal == doctest::Approx(c.kp_s * t * 0.011 - 0.004 / std::cos(c.phi) - 2.0 * c.kp_s * t * 0.023));
}

TEST_CASE("phase-matching surrogate") {
  const auto c = testing::bbo();
  const TransferFunction s(c, testing::gate(), testing::signal(), PhaseMatching::sinc);
  const TransferFunction g(c, testing::gate(), testing::signal(), PhaseMatching::gaussian);
  for (double oc : {0.004, 0.02}) {
    const auto a = s.arguments(oc, 0.001, 0.0);
    const double envelope = s(oc, 0.001, 0.0) / sinc(a.phase);
    CHECK(rel(g(oc, 0.001, 0.0), envelope * std::exp(-0.193 * a.phase * a.phase)) < 1e-12);
  }
}

TEST_CASE("collinear, walk-off-free crystal factorizes in q") {
  const auto c = aligned(2000.0);
  const double w = 107.7;
  const TransferFunction tf(c, testing::gate(), testing::signal(w));
  for (double oc : {-0.02, 0.0, 0.013})
    for (double os : {-0.01, 0.006})
      for (double q : {-0.01, 0.003, 0.02}) {
        const double expected = tf(oc, 0.0, os) * std::exp(-0.5 * w * w * q * q);
        CHECK(std::abs(tf(oc, q, os) - expected) <= 1e-12 * std::abs(tf(oc, 0.0, os)) + 1e-300);
      }
  const auto a = tf.arguments(0.01, 0.5, 0.02);
  CHECK(a.phase == doctest::Approx((c.kp_c - c.kp_s) * 0.01 * 1000.0).epsilon(1e-12));
}

TEST_CASE("grid kernel: parity, reality, norm") {
  const auto c = testing::bbo();
  for (int order : {0, 1}) {
    const auto k = build_kernel(c, testing::gate(order), testing::signal(), testing::coarse(40));
    const auto& ax = k.axes();
    CHECK(k.is_real());
    const double sign = order % 2 == 0 ? 1.0 : -1.0;
    const std::size_t nc = ax.omega_c.size(), nq = ax.q.size(), ns = ax.omega_s.size();
    double worst = 0.0, peak = 0.0, imag = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nq; ++j)
        for (std::size_t s = 0; s < ns; ++s) {
          const auto v = k(i, j, s);
          imag = std::max(imag, std::abs(v.imag()));
          peak = std::max(peak, std::abs(v));
          worst = std::max(worst, std::abs(v - sign * k(nc - 1 - i, nq - 1 - j, ns - 1 - s)));
        }
    CHECK(imag == 0.0);
    CHECK(worst <= 1e-12 * peak);

    double total = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nq; ++j)
        for (std::size_t s = 0; s < ns; ++s)
          total += ax.omega_c.weights()[i] * ax.q.weights()[j] * ax.omega_s.weights()[s] * std::norm(k(i, j, s));
    CHECK(rel(k.norm_sq(), total) < 1e-12);
  }
}

TEST_CASE("scaling a kernel") {
  const auto k = build_kernel(testing::bbo(), testing::gate(), testing::signal(), testing::coarse(24));
  const auto s = k.scaled({0.0, 2.0});
  CHECK_FALSE(s.is_real());
  CHECK(rel(s.norm_sq(), 4.0 * k.norm_sq()) < 1e-14);
  CHECK_THROWS_AS(k.scaled(0.0), NumericalError);
}

TEST_CASE("grid rules") {
  const auto long_crystal = testing::bbo(1, Configuration::co, 11700.0);
  auto cfg = GridConfig{};
  const auto refined = derive_axes(long_crystal, testing::gate(), testing::signal(), cfg);
  CHECK(refined.refined);
  CHECK(refined.omega_c.size() > 128);
  CHECK(refined.omega_c.size() % 16 == 0);

  cfg.auto_refine = false;
  try {
    derive_axes(long_crystal, testing::gate(), testing::signal(), cfg);
    FAIL("expected GridError");
  } catch (const GridError& e) {
    CHECK(std::string(e.what()).find("fewer than 8 points across the sinc main lobe") != std::string::npos);
  }

  auto narrow = GridConfig{};
  narrow.span_scale = 0.2;
  CHECK_THROWS_AS(derive_axes(testing::bbo(), testing::gate(), testing::signal(), narrow), GridError);

  auto bad = GridConfig{};
  bad.q_points = 1;
  CHECK_THROWS_AS(bad.validate(), GridError);
  bad = GridConfig{};
  bad.omega_s_points = 9000;
  CHECK_THROWS_AS(bad.validate(), GridError);

  // Each sinc main lobe along an axis gets the requested number of points.
  const TransferFunction tf(long_crystal, testing::gate(), testing::signal());
  const double lobe = 2.0 * units::kPi / (std::abs(tf.phase_coefficients()[0]) * 0.5 * long_crystal.length);
  CHECK(lobe / refined.omega_c.step() >= 8.0);
}

TEST_CASE("grid step does not change the norm") {
  const auto c = testing::bbo();
  const auto a = build_kernel(c, testing::gate(), testing::signal(), testing::coarse(64));
  const auto b = build_kernel(c, testing::gate(), testing::signal(), testing::coarse(96));
  CHECK(rel(a.norm_sq(), b.norm_sq()) < 1e-4);
}

TEST_CASE("single-mode profiles") {
  const auto c = testing::bbo(1, Configuration::co, 11700.0);
  const auto p = single_mode_profiles(c, testing::gate(), testing::signal());
  CHECK(p.conditions_hold);
  CHECK_FALSE(single_mode_profiles(testing::bbo(), testing::gate(), testing::signal()).conditions_hold);

  // phi(Omega_s) is the normalized gate Gaussian.
  const auto hg = hermite_gauss({0, 94.0, 0.0}, p.omega_s);
  double worst = 0.0;
  for (std::size_t k = 0; k < hg.size(); ++k) worst = std::max(worst, std::abs(p.subtracted[k] - hg[k]));
  CHECK(worst < 1e-6 * hg[hg.size() / 2]);

  double norm = 0.0;
  for (std::size_t i = 0; i < p.omega_c.size(); ++i)
    for (std::size_t j = 0; j < p.q.size(); ++j)
      norm += p.omega_c.weights()[i] * p.q.weights()[j] * std::pow(p.converted[i * p.q.size() + j], 2);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

  // The converted ridge sits at Omega_c = (rho - phi) q / (k'_c - k'_s).
  const double dk = c.kp_c_collinear - c.kp_s;
  const std::size_t j = p.q.size() / 2 + p.q.size() / 8;
  std::size_t best = 0;
  for (std::size_t i = 0; i < p.omega_c.size(); ++i)
    if (p.converted[i * p.q.size() + j] > p.converted[best * p.q.size() + j]) best = i;
  CHECK(std::abs(p.omega_c[best] - (c.rho - c.phi) * p.q[j] / dk) <= p.omega_c.step());
}

TEST_CASE("single-mode converted profile factorizes when phi equals rho") {
  auto c = testing::bbo(1, Configuration::co, 11700.0);
  c.rho = c.phi;
  const auto p = single_mode_profiles(c, testing::gate(), testing::signal());
  const std::size_t nq = p.q.size(), jc = nq / 2, ic = p.omega_c.size() / 2;
  const double centre = p.converted[ic * nq + jc];
  double worst = 0.0;
  for (std::size_t i = 0; i < p.omega_c.size(); i += 7)
    for (std::size_t j = 0; j < nq; j += 5)
      worst = std::max(worst, std::abs(p.converted[i * nq + j] * centre -
                                       p.converted[i * nq + jc] * p.converted[ic * nq + j]));
  CHECK(worst < 1e-12 * centre * centre);
}

TEST_CASE("a long gate pulse imprints its spectrum on the kernel") {
  const double tau = 400.0;
  const auto c = testing::bbo();
  const auto k = build_kernel(c, testing::gate(0, tau), testing::signal(), testing::coarse(64));
  const auto& ax = k.axes();
  const std::size_t ic = ax.omega_c.size() / 2, iq = ax.q.size() / 2;
  std::vector<double> offset(ax.omega_s.size());
  for (std::size_t s = 0; s < offset.size(); ++s) offset[s] = ax.omega_c[ic] - ax.omega_s[s];
  const auto alpha = sample_hermite_gauss({0, tau, 0.0}, offset);
  // Correlation of |L(Omega_c, q_c, Omega_s)|^2 on a central slice with |alpha_g(Omega_c - Omega_s)|^2.
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const double n = static_cast<double>(ax.omega_s.size());
  for (std::size_t s = 0; s < ax.omega_s.size(); ++s) {
    const double x = std::norm(k(ic, iq, s));
    const double y = alpha[s] * alpha[s];
    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
  }
  const double r = (sxy - sx * sy / n) / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
  CHECK(r > 0.99);
}

}
