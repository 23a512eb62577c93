#include "nlsub/dispersion.hpp"

#include <cmath>

#include "nlsub/errors.hpp"
#include "nlsub/units.hpp"

namespace nlsub {

using units::deg_to_rad;
using units::group_index_to_kp;

void CrystalPreset::validate() const {
  if (!(kp_s > 0.0)) throw DomainError("crystal.kp_s must be positive");
  if (!(kp_c > kp_s)) throw DomainError("crystal.kp_c must exceed kp_s (normal dispersion)");
  if (!(kp_c_collinear > kp_s))
    throw DomainError("crystal.kp_c_collinear must exceed kp_s (normal dispersion)");
  if (!(rho >= 0.0)) throw DomainError("crystal.rho must be non-negative");
  if (!(phi_max > 0.0) || !(std::abs(phi) < phi_max))
    throw DomainError("crystal.phi must satisfy |phi| < phi_max");
  if (!(length > 0.0)) throw DomainError("crystal.length must be positive");
  if (!(lambda_s > 0.0) || !(lambda_c > 0.0)) throw DomainError("crystal carrier wavelengths must be positive");
  if (!(n_s > 0.0) || !(n_g > 0.0) || !(n_c > 0.0))
    throw DomainError("crystal refractive indices must be positive");
  if (!(d_eff >= 0.0)) throw DomainError("crystal.d_eff must be non-negative");
}

Configuration CrystalPreset::configuration() const {
  return (phi >= 0.0) == (rho >= 0.0) ? Configuration::co : Configuration::counter;
}

CrystalPreset preset_bbo(int phi_degrees, Configuration configuration) {
  CrystalPreset p;
  p.lambda_s = 0.800;
  p.lambda_c = 0.400;
  p.kp_s = group_index_to_kp(1.683);
  p.kp_c_collinear = group_index_to_kp(1.742);
  p.phi_max = deg_to_rad(19.0);
  p.d_eff = 2.0;
  p.length = 2000.0;
  p.n_s = p.n_g = p.n_c = 1.66;

  switch (phi_degrees) {
    case 1:
      p.kp_c = group_index_to_kp(1.742);
      p.rho = deg_to_rad(3.9);
      p.theta_pm = deg_to_rad(29.4);
      break;
    case 5:
      p.kp_c = group_index_to_kp(1.735);
      p.rho = deg_to_rad(4.1);
      p.theta_pm = deg_to_rad(32.4);
      break;
    default:
      throw DomainError("BBO configuration not tabulated for phi = " + std::to_string(phi_degrees) +
                        " deg (available: 1, 5)");
  }
  const double sign = configuration == Configuration::co ? 1.0 : -1.0;
  p.phi = sign * deg_to_rad(static_cast<double>(phi_degrees));
  p.name = "bbo-phi" + std::to_string(phi_degrees) +
           (configuration == Configuration::co ? "-co" : "-counter");
  return p;
}

std::vector<std::string> preset_names() {
  return {"bbo-phi1-co", "bbo-phi1-counter", "bbo-phi5-co", "bbo-phi5-counter"};
}

CrystalPreset preset_by_name(std::string_view name) {
  if (name == "bbo-phi1-co") return preset_bbo(1, Configuration::co);
  if (name == "bbo-phi1-counter") return preset_bbo(1, Configuration::counter);
  if (name == "bbo-phi5-co") return preset_bbo(5, Configuration::co);
  if (name == "bbo-phi5-counter") return preset_bbo(5, Configuration::counter);
  throw DomainError("unknown crystal preset '" + std::string(name) + "'");
}

double signal_transverse_momentum(const CrystalPreset& c, double omega_c, double q_c,
                                  double omega_s) {
  // Carrier wavenumbers of gate and signal are equal and cancel.
  const double omega_g = omega_c - omega_s;
  const double k_g = c.kp_s * omega_g;
  const double k_s = c.kp_s * omega_s;
  // (q_g + q_s) cos(phi) - q_c + (k_s - k_g) sin(phi) = 0 with q_g = 0.
  return (q_c + (k_g - k_s) * std::sin(c.phi)) / std::cos(c.phi);
}

double delta_k(const CrystalPreset& c, double omega_c, double q_c, double omega_s) {
  const double omega_g = omega_c - omega_s;
  const double k_g = c.kp_s * omega_g;
  const double k_s = c.kp_s * omega_s;
  const double k_c = c.kp_c * omega_c;
  const double q_s = signal_transverse_momentum(c, omega_c, q_c, omega_s);
  // (k_g + k_s) cos(phi) - k_c + (q_g - q_s) sin(phi) + q_c tan(rho); carrier
  // terms vanish by phase matching.
  const double balance =
      (k_g + k_s) * std::cos(c.phi) - k_c - q_s * std::sin(c.phi) + q_c * std::tan(c.rho);
  return -balance;
}

double convert_bandwidth(double fwhm_nm, double lambda_um) {
  if (!(fwhm_nm > 0.0)) throw DomainError("spectral FWHM must be positive");
  if (!(lambda_um > 0.0)) throw DomainError("carrier wavelength must be positive");
  const double dlambda = units::nm_to_um(fwhm_nm);
  const double domega = 2.0 * units::kPi * units::kSpeedOfLight * dlambda / (lambda_um * lambda_um);
  return 2.0 * std::sqrt(std::log(2.0)) / domega;
}

double bandwidth_from_duration(double tau_fs, double lambda_um) {
  if (!(tau_fs > 0.0)) throw DomainError("pulse duration must be positive");
  if (!(lambda_um > 0.0)) throw DomainError("carrier wavelength must be positive");
  const double domega = 2.0 * std::sqrt(std::log(2.0)) / tau_fs;
  return units::um_to_nm(domega * lambda_um * lambda_um / (2.0 * units::kPi * units::kSpeedOfLight));
}

}  // namespace nlsub
