#pragma once

// Reduced transfer function of the plane-wave-gate up-conversion,
//   L = alpha_g(Oc - Os) u_s(q_s) sinc(dk l / 2),
// sampled on a 3-D trapezoid grid over (Omega_c, q_c, Omega_s).

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "nlsub/beams.hpp"
#include "nlsub/dispersion.hpp"
#include "nlsub/modes.hpp"

namespace nlsub {

enum class PhaseMatching {
  sinc,      ///< sin(x)/x
  gaussian,  ///< exp(-gamma x^2), the surrogate used by the analytic model
};

struct GridConfig {
  std::size_t omega_c_points = 128;
  std::size_t q_points = 128;
  std::size_t omega_s_points = 128;
  double span_scale = 1.0;
  /// Raise point counts when the resolution rules demand it; otherwise throw.
  bool auto_refine = true;
  double min_points_per_lobe = 8.0;
  PhaseMatching phase_matching = PhaseMatching::sinc;

  void validate() const;
};

struct KernelAxes {
  QuadGrid omega_c;  ///< rad/fs
  QuadGrid q;        ///< 1/um
  QuadGrid omega_s;  ///< rad/fs
  bool refined = false;

  std::size_t rows() const { return omega_c.size() * q.size(); }
  std::size_t size() const { return rows() * omega_s.size(); }
};

/// Spans and point counts for one operating point. Spans cover the gate
/// support, the signal mode family and the Gaussian-surrogate marginal of the
/// kernel; point counts satisfy the resolution rules (sinc lobes, gate and
/// signal widths). Throws GridError when a rule fails and auto_refine is off,
/// or when a marginal cannot be normalized on its axis.
KernelAxes derive_axes(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal,
                       const GridConfig& config);

/// sin(x)/x with a series near zero.
double sinc(double x);

class TransferFunction {
 public:
  struct Arguments {
    double gate;     ///< Omega_c - Omega_s
    double signal;   ///< q_s
    double phase;    ///< sinc argument, delta_k l / 2
  };

  TransferFunction(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal,
                   PhaseMatching phase_matching = PhaseMatching::sinc);

  Arguments arguments(double omega_c, double q_c, double omega_s) const;
  double operator()(double omega_c, double q_c, double omega_s) const;

  /// Writes L for flattened rows [row_begin, row_end) of the (Omega_c, q_c)
  /// index, row = i_c * n_q + i_q, each row holding all Omega_s samples.
  void fill_rows(const KernelAxes& axes, std::size_t row_begin, std::size_t row_end,
                 std::complex<double>* out) const;

  /// Coefficients of the three factor arguments in (Omega_c, q_c, Omega_s).
  const double* gate_coefficients() const { return gate_; }
  const double* signal_coefficients() const { return signal_; }
  const double* phase_coefficients() const { return phase_; }

 private:
  double gate_[3];
  double signal_[3];
  double phase_[3];
  HermiteGaussSpec gate_spectral_;
  double signal_waist_;
  double half_length_;
  PhaseMatching phase_matching_;
};

class KernelGrid {
 public:
  KernelGrid(KernelAxes axes, std::vector<std::complex<double>> values, bool is_real);

  const KernelAxes& axes() const { return axes_; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  std::size_t index(std::size_t i_c, std::size_t i_q, std::size_t i_s) const {
    return (i_c * axes_.q.size() + i_q) * axes_.omega_s.size() + i_s;
  }
  std::complex<double> operator()(std::size_t i_c, std::size_t i_q, std::size_t i_s) const {
    return values_[index(i_c, i_q, i_s)];
  }
  double norm_sq() const { return norm_sq_; }
  bool is_real() const { return is_real_; }

  /// Copy with every sample multiplied by s.
  KernelGrid scaled(std::complex<double> s) const;

 private:
  KernelAxes axes_;
  std::vector<std::complex<double>> values_;
  double norm_sq_ = 0.0;
  bool is_real_ = true;
};

/// Parallel over Omega_c.
KernelGrid build_kernel(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal,
                        const GridConfig& config = {});
KernelGrid build_kernel(const TransferFunction& transfer, const KernelAxes& axes);

/// Columns omega_c, q_c, omega_s, re, im; row-major over the three axes.
void write_kernel_csv(const KernelGrid& kernel, const std::string& path);

struct SingleModeProfiles {
  QuadGrid omega_s;
  std::vector<double> subtracted;  ///< phi(Omega_s) = alpha_g(Omega_s)
  QuadGrid omega_c;
  QuadGrid q;
  std::vector<double> converted;   ///< psi(Omega_c, q_c), index i_c * n_q + i_q
  bool conditions_hold = false;    ///< single-mode conditions within a factor 3
};

SingleModeProfiles single_mode_profiles(const CrystalPreset& crystal, const GateSpec& gate,
                                        const SignalBeamSpec& signal, const GridConfig& config = {});

}  // namespace nlsub
