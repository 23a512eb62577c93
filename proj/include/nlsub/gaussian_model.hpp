#pragma once

// Closed-form model of the up-conversion kernel with the phase-matching sinc
// replaced by exp(-gamma x^2): characteristic scales, the Schmidt number as a
// function of crystal length and signal focusing, the exact Schmidt number of
// an arbitrary Gaussian kernel through its covariance matrices, and the
// single-mode conversion efficiency.

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "nlsub/beams.hpp"
#include "nlsub/dispersion.hpp"

namespace nlsub::gaussian {

/// sinc(x) ~ exp(-gamma x^2) with equal FWHM.
inline constexpr double kSincGamma = 0.193;

struct ModelParams {
  double kp_s = 0.0;   ///< fs/um
  double kp_c = 0.0;   ///< fs/um
  double phi = 0.0;    ///< rad, signed
  double rho = 0.0;    ///< rad
  double tau_g = 0.0;  ///< fs
  double w_s = 0.0;    ///< um
  double l = 0.0;      ///< um
  double gamma = kSincGamma;

  void validate() const;

  /// Parameters for the analytic formulas: kp_c is the collinear value.
  static ModelParams analytic(const CrystalPreset& crystal, double tau_g, double w_s);
  /// Parameters matching the numerical kernel: kp_c is the preset's own value.
  static ModelParams kernel_matched(const CrystalPreset& crystal, double tau_g, double w_s);
};

struct CharacteristicScales {
  double phi0 = 0.0;   ///< rad
  double l0 = 0.0;     ///< um
  std::optional<double> l_opt;  ///< um; empty when phi == 0 (no finite optimum)
  double w_opt = 0.0;  ///< um
  double k_min = 0.0;
};

CharacteristicScales characteristic_scales(const ModelParams& p);

struct SingleModeConditions {
  double phi_ratio = 0.0;     ///< (phi^2 + |phi(phi-rho)|) / phi0^2
  double length_ratio = 0.0;  ///< l0 / l
  bool hold = false;          ///< both ratios at most 1/3
};

SingleModeConditions single_mode_conditions(const ModelParams& p);

/// K(l, w_s) = sqrt((a(l) w_s^2 + b)(c(l) w_s^-2 + d)). Not clamped.
double schmidt_number_closed_form(const ModelParams& p);

/// Exponent matrices of L = C exp(-x^T U x / 2), x = (Omega_c, q_c, Omega_s),
/// and of the four-factor product L*(x1) L(x2) L(x3) L*(x4) over
/// X = (Omega_c, q_c, Omega_s, Omega_c', q_c', Omega_s').
struct CovarianceForm {
  Eigen::Matrix3d u;
  Eigen::Matrix<double, 6, 6> v;
  bool rank_deficient = false;
};

/// U = tau_g^2 v1 v1^T + w_s^2 v2 v2^T + 2 gamma (l/2)^2 v3 v3^T with the
/// un-expanded trigonometric coefficients of the transfer function.
CovarianceForm build_covariance(const ModelParams& p);

/// V from U through the defining identity: the exponent of
/// L*(Oc,qc,Os) L(Oc,qc,Os') L(Oc',qc',Os) L*(Oc',qc',Os').
Eigen::MatrixXd assemble_four_factor(const Eigen::MatrixXd& u);

/// sqrt(det V) / det(2U). U must be symmetric positive definite; the last
/// coordinate is the signal (Omega_s) variable, the rest are converted-field
/// variables.
double covariance_schmidt_number(const Eigen::MatrixXd& u);

/// As above; a rank-deficient form is reduced by dropping converted-field
/// coordinates that are decoupled and unconfined.
double covariance_schmidt_number(const CovarianceForm& form);

struct SingleModeRate {
  double lambda_sq = 0.0;      ///< rad/fs, single Schmidt coefficient squared
  double p_norm = 0.0;         ///< m^2/J, probability per photon per gate fluence
  double probability = 0.0;    ///< per pulse
  double rate = 0.0;           ///< events/s
  bool single_mode_conditions = false;
  double phi_condition_ratio = 0.0;  ///< (phi^2 + |phi(phi-rho)|) / phi0^2
  double length_ratio = 0.0;         ///< l0 / l
};

/// Single-mode regime conversion: lambda^2 = pi / ((k'_c - k'_s) l / 2) and the
/// normalized subtraction probability. w_s is used only for the plane-wave
/// guard and the single-mode condition check.
SingleModeRate single_mode_rate(const CrystalPreset& crystal, const GateSpec& gate,
                                double photons_per_pulse,
                                std::optional<SignalBeamSpec> signal = std::nullopt);

/// |C'|^2 in seconds: probability per pulse = |C'|^2 * sum lambda^2 |O|^2 N,
/// with the kernel weights sum lambda^2 in rad/s.
double coupling_constant_sq(const CrystalPreset& crystal, const GateSpec& gate);

/// (eps0 chi2 E_s E_c)^2 / (2 eps0 n_g c hbar^2) in SI; P_norm = this * l / dk'.
double nonlinear_prefactor_si(const CrystalPreset& crystal);

}  // namespace nlsub::gaussian
