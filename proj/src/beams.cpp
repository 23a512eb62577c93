#include "nlsub/beams.hpp"

#include <cmath>

#include "nlsub/errors.hpp"

namespace nlsub {

void GateSpec::validate() const {
  spectral.validate();
  if (spectral.order > 2) throw DomainError("gate spectral order must be 0, 1 or 2");
  if (!(waist > 0.0)) throw DomainError("gate waist must be positive");
  if (!(energy >= 0.0)) throw DomainError("gate energy must be non-negative");
  if (!(rep_rate > 0.0)) throw DomainError("gate repetition rate must be positive");
}

void SignalBeamSpec::validate() const {
  if (!(waist > 0.0)) throw DomainError("signal waist must be positive");
  if (!(spectral_tau > 0.0)) throw DomainError("signal spectral tau must be positive");
}

void require_plane_wave_gate(const GateSpec& gate, const SignalBeamSpec& signal) {
  gate.validate();
  signal.validate();
  if (gate.waist < 5.0 * signal.waist)
    throw DomainError("plane-wave gate requires gate waist >= 5 x signal waist (" +
                      std::to_string(gate.waist) + " um vs " + std::to_string(signal.waist) + " um)");
}

}  // namespace nlsub
