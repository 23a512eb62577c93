#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlsub {

/// Hermite-Gauss function sqrt(scale) * psi_n(scale * (x - center)), where
/// psi_n is the orthonormal Hermite function. scale is tau (fs) for spectral
/// modes and w (um) for transverse-momentum modes; order 0 with scale tau is
/// sqrt(tau)/pi^(1/4) exp(-tau^2 x^2 / 2).
struct HermiteGaussSpec {
  int order = 0;
  double scale = 1.0;
  double center = 0.0;

  void validate() const;
};

/// Uniform trapezoid quadrature on [lo, hi].
class QuadGrid {
 public:
  QuadGrid() = default;

  static QuadGrid uniform(double lo, double hi, std::size_t n, std::string axis = {});
  static QuadGrid symmetric(double half_span, std::size_t n, std::string axis = {});

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  double step() const { return step_; }
  double lo() const { return points_.front(); }
  double hi() const { return points_.back(); }
  double span() const { return hi() - lo(); }
  const std::string& axis() const { return axis_; }

  bool operator==(const QuadGrid& other) const {
    return points_ == other.points_ && weights_ == other.weights_;
  }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double step_ = 0.0;
  std::string axis_;
};

/// Orthonormal Hermite function psi_n(x), evaluated with the normalized
/// three-term recurrence (no factorials, no overflow for large n).
double hermite_function(int n, double x);

/// Continuum-normalized samples at arbitrary abscissae. No adequacy check.
std::vector<double> sample_hermite_gauss(const HermiteGaussSpec& spec, std::span<const double> xs);

/// Samples on a grid. Throws GridError when the grid span cannot hold the
/// function (normalization defect above 1e-6).
std::vector<double> hermite_gauss(const HermiteGaussSpec& spec, const QuadGrid& grid);

/// |1 - sum_k w_k |f_k|^2|
double normalization_defect(std::span<const double> f, const QuadGrid& grid);

/// sum_k w_k conj(f_k) g_k
std::complex<double> inner_product(std::span<const std::complex<double>> f,
                                   std::span<const std::complex<double>> g, const QuadGrid& grid);
double inner_product(std::span<const double> f, std::span<const double> g, const QuadGrid& grid);

}  // namespace nlsub
