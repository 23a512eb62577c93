#pragma once

#include "nlsub/modes.hpp"

namespace nlsub {

/// Strong classical gate pulse. Spectral profile alpha_g is a Hermite-Gauss
/// function of Omega_g with scale tau_g (fs); the transverse profile is treated
/// as a plane wave in the kernel and enters only through the coupling constant.
struct GateSpec {
  HermiteGaussSpec spectral{0, 94.0, 0.0};
  double waist = 1000.0;     ///< w_g, um
  double energy = 10e-9;     ///< W_g, J
  double rep_rate = 80e6;    ///< Hz

  double tau() const { return spectral.scale; }
  int order() const { return spectral.order; }
  void validate() const;
};

/// Signal beam: single Gaussian transverse mode of width w_s, spectral eigenmode
/// family of scale tau_s.
struct SignalBeamSpec {
  double waist = 107.7;         ///< w_s, um
  double spectral_tau = 93.1;   ///< tau_s, fs

  void validate() const;
};

/// Throws DomainError unless w_g >= 5 w_s (plane-wave gate).
void require_plane_wave_gate(const GateSpec& gate, const SignalBeamSpec& signal);

}  // namespace nlsub
