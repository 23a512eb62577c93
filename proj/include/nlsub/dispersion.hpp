#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nlsub {

enum class Configuration {
  co,       ///< sign(phi) == sign(rho): signal co-propagates with the walk-off
  counter,  ///< sign(phi) == -sign(rho)
};

/// Crystal and carrier parameters of one phase-matched type-I (o + o -> e)
/// non-collinear configuration. Internal units; see units.hpp.
struct CrystalPreset {
  std::string name;
  double lambda_s = 0.8;        ///< signal/gate carrier wavelength, um
  double lambda_c = 0.4;        ///< up-converted carrier wavelength, um
  double kp_s = 0.0;            ///< inverse group velocity of the ordinary fundamental, fs/um
  double kp_c = 0.0;            ///< inverse group velocity of the extraordinary up-converted field, fs/um
  double kp_c_collinear = 0.0;  ///< kp_c in the collinear limit, used by the analytic model
  double rho = 0.0;             ///< walk-off angle, rad, always > 0
  double phi = 0.0;             ///< signed non-collinear angle, rad
  double theta_pm = 0.0;        ///< phase-matching angle, rad (metadata only)
  double phi_max = 0.0;         ///< largest phase-matchable |phi|, rad
  double n_s = 1.66;
  double n_g = 1.66;
  double n_c = 1.66;
  double d_eff = 2.0;           ///< effective nonlinearity, pm/V (chi2 = 2 d_eff)
  double length = 2000.0;       ///< crystal length, um

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  Configuration configuration() const;
  double chi2_si() const { return 2.0 * d_eff * 1e-12; }
};

/// BBO cut for degenerate type-I non-collinear SFG at 800 nm. Only phi = 1 and
/// phi = 5 degrees are tabulated.
CrystalPreset preset_bbo(int phi_degrees, Configuration configuration);

/// Looks up "bbo-phi1-co", "bbo-phi1-counter", "bbo-phi5-co", "bbo-phi5-counter".
CrystalPreset preset_by_name(std::string_view name);
std::vector<std::string> preset_names();

/// Transverse momentum of the signal photon (1/um) that is up-converted into
/// (omega_c, q_c) by a plane-wave gate, from transverse momentum conservation.
double signal_transverse_momentum(const CrystalPreset& crystal, double omega_c, double q_c,
                                  double omega_s);

/// First-order longitudinal phase mismatch (1/um) at frequency offsets omega_c,
/// omega_s (rad/fs) and converted transverse momentum q_c (1/um), plane-wave gate.
///
/// Evaluated through the conservation chain: energy fixes the gate offset,
/// transverse momentum fixes q_s, and the longitudinal balance gives the
/// mismatch. The sign is chosen so that the mismatch grows with omega_c for
/// normal dispersion; sinc(delta_k * l / 2) is insensitive to it.
double delta_k(const CrystalPreset& crystal, double omega_c, double q_c, double omega_s);

/// Duration parameter tau (fs) of the amplitude exp(-tau^2 Omega^2 / 2) whose
/// spectral intensity has the given FWHM (nm) at carrier wavelength lambda (um).
double convert_bandwidth(double fwhm_nm, double lambda_um);

/// Inverse of convert_bandwidth: intensity FWHM in nm.
double bandwidth_from_duration(double tau_fs, double lambda_um);

}  // namespace nlsub
