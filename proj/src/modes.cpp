#include "nlsub/modes.hpp"

#include <cmath>

#include "nlsub/errors.hpp"
#include "nlsub/units.hpp"

namespace nlsub {

void HermiteGaussSpec::validate() const {
  if (order < 0) throw DomainError("Hermite-Gauss order must be non-negative");
  if (!(scale > 0.0)) throw DomainError("Hermite-Gauss scale must be positive");
  if (!std::isfinite(center)) throw DomainError("Hermite-Gauss center must be finite");
}

QuadGrid QuadGrid::uniform(double lo, double hi, std::size_t n, std::string axis) {
  if (n < 2) throw GridError("quadrature grid needs at least two points");
  if (!(hi > lo)) throw GridError("quadrature grid needs lo < hi");
  QuadGrid g;
  g.axis_ = std::move(axis);
  g.step_ = (hi - lo) / static_cast<double>(n - 1);
  g.points_.resize(n);
  g.weights_.assign(n, g.step_);
  for (std::size_t i = 0; i < n; ++i) g.points_[i] = lo + g.step_ * static_cast<double>(i);
  g.points_.back() = hi;
  g.weights_.front() = g.weights_.back() = 0.5 * g.step_;
  return g;
}

QuadGrid QuadGrid::symmetric(double half_span, std::size_t n, std::string axis) {
  QuadGrid g = uniform(-half_span, half_span, n, std::move(axis));
  // Mirror so that points[i] == -points[n-1-i] exactly.
  for (std::size_t i = 0; i < n / 2; ++i) g.points_[n - 1 - i] = -g.points_[i];
  if (n % 2 == 1) g.points_[n / 2] = 0.0;
  return g;
}

double hermite_function(int n, double x) {
  double prev = 0.0;
  double cur = std::exp(-0.5 * x * x) / std::pow(units::kPi, 0.25);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> sample_hermite_gauss(const HermiteGaussSpec& spec, std::span<const double> xs) {
  spec.validate();
  std::vector<double> out(xs.size());
  const double amp = std::sqrt(spec.scale);
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = amp * hermite_function(spec.order, spec.scale * (xs[i] - spec.center));
  return out;
}

double normalization_defect(std::span<const double> f, const QuadGrid& grid) {
  if (f.size() != grid.size()) throw ShapeError("samples do not match the grid");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * f[i];
  return std::abs(1.0 - s);
}

std::vector<double> hermite_gauss(const HermiteGaussSpec& spec, const QuadGrid& grid) {
  auto f = sample_hermite_gauss(spec, grid.points());
  const double defect = normalization_defect(f, grid);
  if (defect > 1e-6)
    throw GridError("grid [" + std::to_string(grid.lo()) + ", " + std::to_string(grid.hi()) +
                    "] cannot hold HG_" + std::to_string(spec.order) +
                    " (normalization defect " + std::to_string(defect) + ")");
  return f;
}

std::complex<double> inner_product(std::span<const std::complex<double>> f,
                                   std::span<const std::complex<double>> g, const QuadGrid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw ShapeError("inner product operands must be sampled on the same grid");
  const auto w = grid.weights();
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::conj(f[i]) * g[i];
  return s;
}

double inner_product(std::span<const double> f, std::span<const double> g, const QuadGrid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw ShapeError("inner product operands must be sampled on the same grid");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
  return s;
}

}  // namespace nlsub
