#include "nlsub/gaussian_model.hpp"

#include <cmath>
#include <vector>

#include "nlsub/errors.hpp"
#include "nlsub/units.hpp"

namespace nlsub::gaussian {

using units::kPi;

void ModelParams::validate() const {
  if (!(kp_s > 0.0) || !(kp_c > kp_s)) throw DomainError("model requires kp_c > kp_s > 0");
  if (!(tau_g > 0.0)) throw DomainError("model requires tau_g > 0");
  if (!(w_s > 0.0)) throw DomainError("model requires w_s > 0");
  if (!(l > 0.0)) throw DomainError("model requires l > 0");
  if (!(gamma > 0.0)) throw DomainError("model requires gamma > 0");
}

ModelParams ModelParams::analytic(const CrystalPreset& crystal, double tau_g, double w_s) {
  ModelParams p;
  p.kp_s = crystal.kp_s;
  p.kp_c = crystal.kp_c_collinear;
  p.phi = crystal.phi;
  p.rho = crystal.rho;
  p.tau_g = tau_g;
  p.w_s = w_s;
  p.l = crystal.length;
  return p;
}

ModelParams ModelParams::kernel_matched(const CrystalPreset& crystal, double tau_g, double w_s) {
  ModelParams p = analytic(crystal, tau_g, w_s);
  p.kp_c = crystal.kp_c;
  return p;
}

CharacteristicScales characteristic_scales(const ModelParams& p) {
  p.validate();
  CharacteristicScales s;
  const double dk = p.kp_c - p.kp_s;
  s.phi0 = std::sqrt((p.kp_c / p.kp_s - 1.0) / 2.0);
  s.l0 = p.tau_g / (std::sqrt(p.gamma / 2.0) * dk);
  const double gate_length = p.tau_g / p.kp_s;
  const double aphi = std::abs(p.phi);
  if (aphi > 0.0) {
    s.l_opt = gate_length / (std::sqrt(2.0 * p.gamma) * s.phi0 * aphi);
  }
  // |rho/phi - 1| written as |rho - phi| / |phi| so that phi = 0 gives +inf.
  s.w_opt = gate_length * std::sqrt(std::abs(p.rho - p.phi) / aphi) / (2.0 * s.phi0);
  s.k_min = 1.0 + (p.phi * p.phi + std::abs(p.phi * (p.phi - p.rho))) / (s.phi0 * s.phi0);
  return s;
}

SingleModeConditions single_mode_conditions(const ModelParams& p) {
  const auto s = characteristic_scales(p);
  SingleModeConditions c;
  c.phi_ratio = (p.phi * p.phi + std::abs(p.phi * (p.phi - p.rho))) / (s.phi0 * s.phi0);
  c.length_ratio = s.l0 / p.l;
  // "much less than" is read as at least a factor of three.
  c.hold = c.phi_ratio <= 1.0 / 3.0 && c.length_ratio <= 1.0 / 3.0;
  return c;
}

double schmidt_number_closed_form(const ModelParams& p) {
  p.validate();
  const double dk = p.kp_c - p.kp_s;
  const double t2 = p.tau_g * p.tau_g;
  const double l2 = p.l * p.l;
  const double w2 = p.w_s * p.w_s;
  const double phi2 = p.phi * p.phi;
  const double ks2 = p.kp_s * p.kp_s;
  const double a = 1.0 + 2.0 * t2 / (p.gamma * dk * dk * l2);
  const double b = (p.phi - p.rho) * (p.phi - p.rho) * t2 / (dk * dk);
  const double c = 1.0 + 2.0 * phi2 * phi2 * p.gamma * ks2 * l2 / t2;
  const double d = 4.0 * phi2 * ks2 / t2;
  return std::sqrt((a * w2 + b) * (c / w2 + d));
}

CovarianceForm build_covariance(const ModelParams& p) {
  p.validate();
  const double tphi = std::tan(p.phi);
  const double sphi = std::sin(p.phi);
  const double cphi = std::cos(p.phi);
  const Eigen::Vector3d gate(1.0, 0.0, -1.0);
  const Eigen::Vector3d signal(p.kp_s * tphi, 1.0 / cphi, -2.0 * p.kp_s * tphi);
  const Eigen::Vector3d phase(p.kp_c - p.kp_s * cphi + p.kp_s * tphi * sphi, tphi - std::tan(p.rho),
                              -2.0 * p.kp_s * tphi * sphi);
  const double half_l = 0.5 * p.l;

  CovarianceForm f;
  f.u = p.tau_g * p.tau_g * gate * gate.transpose() + p.w_s * p.w_s * signal * signal.transpose() +
        2.0 * p.gamma * half_l * half_l * phase * phase.transpose();
  f.v = assemble_four_factor(f.u);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(f.u);
  const auto ev = es.eigenvalues();
  f.rank_deficient = !(ev.minCoeff() > 1e-12 * ev.maxCoeff());
  return f;
}

Eigen::MatrixXd assemble_four_factor(const Eigen::MatrixXd& u) {
  const Eigen::Index n = u.rows();
  if (n < 2 || u.cols() != n) throw ShapeError("exponent matrix must be square with at least 2 rows");
  const Eigen::Index d = n - 1;  // converted-field coordinates
  // Coordinates of X = (y, s, y', s') feeding each factor's argument (y, s).
  auto selector = [&](bool primed_y, bool primed_s) {
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(n, 2 * n);
    const Eigen::Index y0 = primed_y ? n : 0;
    for (Eigen::Index i = 0; i < d; ++i) sel(i, y0 + i) = 1.0;
    sel(d, primed_s ? 2 * n - 1 : d) = 1.0;
    return sel;
  };
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (const auto& [py, ps] : {std::pair{false, false}, {false, true}, {true, false}, {true, true}}) {
    const Eigen::MatrixXd sel = selector(py, ps);
    v += sel.transpose() * u * sel;
  }
  return v;
}

namespace {

double log_det_spd(const Eigen::MatrixXd& m, const char* what) {
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + " is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

double covariance_schmidt_number(const Eigen::MatrixXd& u) {
  if (u.rows() != u.cols() || u.rows() < 2) throw ShapeError("U must be square with at least 2 rows");
  if (!u.isApprox(u.transpose(), 1e-12)) throw DomainError("U must be symmetric");
  const double log_det_2u = log_det_spd(2.0 * u, "U");
  const double log_det_v = log_det_spd(assemble_four_factor(u), "V");
  return std::exp(0.5 * log_det_v - log_det_2u);
}

double covariance_schmidt_number(const CovarianceForm& form) {
  if (!form.rank_deficient) return covariance_schmidt_number(Eigen::MatrixXd(form.u));

  const double scale = form.u.cwiseAbs().maxCoeff();
  auto decoupled = [&](int i) { return form.u.row(i).cwiseAbs().maxCoeff() <= 1e-12 * scale; };
  if (decoupled(2)) throw DomainError("signal frequency is unconfined; Schmidt number undefined");
  std::vector<int> keep;
  for (int i = 0; i < 2; ++i)
    if (!decoupled(i)) keep.push_back(i);
  keep.push_back(2);
  Eigen::MatrixXd reduced(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) reduced(i, j) = form.u(keep[i], keep[j]);
  return covariance_schmidt_number(reduced);
}

double nonlinear_prefactor_si(const CrystalPreset& crystal) {
  using namespace units::si;
  const double omega_s = 2.0 * kPi * kSpeedOfLight / units::um_to_m(crystal.lambda_s);
  const double omega_c = 2.0 * kPi * kSpeedOfLight / units::um_to_m(crystal.lambda_c);
  const double e_s_sq = kReducedPlanck * omega_s / (2.0 * kVacuumPermittivity * crystal.n_s * kSpeedOfLight);
  const double e_c_sq = kReducedPlanck * omega_c / (2.0 * kVacuumPermittivity * crystal.n_c * kSpeedOfLight);
  const double eps_chi = kVacuumPermittivity * crystal.chi2_si();
  return eps_chi * eps_chi * e_s_sq * e_c_sq /
         (2.0 * kVacuumPermittivity * crystal.n_g * kSpeedOfLight * kReducedPlanck * kReducedPlanck);
}

double coupling_constant_sq(const CrystalPreset& crystal, const GateSpec& gate) {
  gate.validate();
  const double l = units::um_to_m(crystal.length);
  const double wg = units::um_to_m(gate.waist);
  return nonlinear_prefactor_si(crystal) * l * l * gate.energy / (2.0 * kPi * kPi * wg * wg);
}

SingleModeRate single_mode_rate(const CrystalPreset& crystal, const GateSpec& gate,
                                double photons_per_pulse, std::optional<SignalBeamSpec> signal) {
  crystal.validate();
  gate.validate();
  if (!(photons_per_pulse >= 0.0)) throw DomainError("photon number must be non-negative");
  if (signal) require_plane_wave_gate(gate, *signal);

  SingleModeRate r;
  const double dk = crystal.kp_c_collinear - crystal.kp_s;
  r.lambda_sq = kPi / (dk * crystal.length / 2.0);
  r.p_norm = nonlinear_prefactor_si(crystal) * units::um_to_m(crystal.length) /
             units::inverse_velocity_to_si(dk);
  const double wg = units::um_to_m(gate.waist);
  r.probability = r.p_norm * photons_per_pulse * gate.energy / (kPi * wg * wg);
  r.rate = r.probability * gate.rep_rate;

  const auto cond =
      single_mode_conditions(ModelParams::analytic(crystal, gate.tau(), signal ? signal->waist : 1.0));
  r.phi_condition_ratio = cond.phi_ratio;
  r.length_ratio = cond.length_ratio;
  r.single_mode_conditions = cond.hold;
  return r;
}

}  // namespace nlsub::gaussian
