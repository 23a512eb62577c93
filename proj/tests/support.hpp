#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nlsub/beams.hpp"
#include "nlsub/dispersion.hpp"
#include "nlsub/kernel.hpp"
#include "nlsub/units.hpp"

namespace testing {

inline nlsub::CrystalPreset bbo(int phi_deg = 1, nlsub::Configuration conf = nlsub::Configuration::co,
                                double length_um = 2000.0) {
  auto c = nlsub::preset_bbo(phi_deg, conf);
  c.length = length_um;
  return c;
}

inline nlsub::GateSpec gate(int order = 0, double tau = 94.0) {
  nlsub::GateSpec g;
  g.spectral = {order, tau, 0.0};
  return g;
}

inline nlsub::SignalBeamSpec signal(double waist = 107.7, double tau = 93.1) {
  nlsub::SignalBeamSpec s;
  s.waist = waist;
  s.spectral_tau = tau;
  return s;
}

inline nlsub::GridConfig coarse(std::size_t n = 48) {
  nlsub::GridConfig g;
  g.omega_c_points = g.q_points = g.omega_s_points = n;
  return g;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing
