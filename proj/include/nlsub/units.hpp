#pragma once

// Internal unit system: time in fs, length in um, angular frequency in rad/fs,
// inverse group velocity in fs/um, angles in rad. SI only at the I/O boundary.

#include <numbers>

namespace nlsub::units {

inline constexpr double kPi = std::numbers::pi;

/// Speed of light in um/fs. Every unit conversion goes through this value.
inline constexpr double kSpeedOfLight = 0.299792458;

namespace si {
inline constexpr double kSpeedOfLight = units::kSpeedOfLight * 1e9;  // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kReducedPlanck = 1.054571817e-34;  // J s
}  // namespace si

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double nm_to_um(double nm) { return nm * 1e-3; }
constexpr double um_to_nm(double um) { return um * 1e3; }
constexpr double mm_to_um(double mm) { return mm * 1e3; }
constexpr double um_to_mm(double um) { return um * 1e-3; }
constexpr double um_to_m(double um) { return um * 1e-6; }

/// fs/um -> s/m
constexpr double inverse_velocity_to_si(double fs_per_um) { return fs_per_um * 1e-9; }

/// Inverse group velocity (fs/um) from a group index n_g = c k'.
constexpr double group_index_to_kp(double group_index) { return group_index / kSpeedOfLight; }
constexpr double kp_to_group_index(double kp) { return kp * kSpeedOfLight; }

/// Carrier angular frequency (rad/fs) of a vacuum wavelength in um.
constexpr double angular_frequency(double lambda_um) { return 2.0 * kPi * kSpeedOfLight / lambda_um; }

}  // namespace nlsub::units
