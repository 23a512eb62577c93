#pragma once

// Multimode squeezed comb, overlap with the subtraction modes, and the
// heralded state's probability, purity and event rate.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "nlsub/kernel.hpp"
#include "nlsub/schmidt.hpp"

namespace nlsub {

/// sinh^2(r) / F with r = dB ln(10) / 20.
double photons_from_squeezing(double squeezing_db, double finesse);

/// Comb eigenmodes s_n = HG_n(tau_s), n = 0..N-1, with mean photon numbers.
struct CombState {
  double tau = 93.1;                 ///< tau_s, fs
  std::vector<double> photons_comb;  ///< N^comb per mode
  double finesse = 40.0;

  void validate() const;
  std::size_t size() const { return photons_comb.size(); }
  /// N_n = N^comb_n / F
  std::vector<double> photons_pulse() const;
  HermiteGaussSpec mode(std::size_t n) const { return {static_cast<int>(n), tau, 0.0}; }

  /// Every one of the first `modes` modes carries sinh^2(r), r from squeezing_db.
  static CombState flat(double tau, std::size_t modes, double squeezing_db, double finesse);
  /// CSV with header "n,photons"; n is the 0-based mode order, photons the
  /// per-mode comb value. Absent orders are empty.
  static CombState from_csv(const std::string& path, double tau, double finesse);
};

/// O_mn = <phi_m, s_n> on the Omega_s grid; modes is n_s x M. Comb modes are
/// sampled without a span check: only their product with phi_m matters.
Eigen::MatrixXcd overlap_matrix(const Eigen::MatrixXcd& subtraction_modes, const CombState& comb,
                                const QuadGrid& grid);

/// Tr(rho^2) = sum lambda_m lambda_m' |sum_n O_mn O*_m'n N_n|^2 / (sum lambda_m |O_mn|^2 N_n)^2,
/// with lambda_m the squared Schmidt coefficients. Throws DomainError when the
/// denominator vanishes.
double purity(std::span<const double> lambdas_sq, const Eigen::MatrixXcd& overlap, std::span<const double> photons);

/// sum lambda_m |O_mn|^2 N_n
double probability_weight(std::span<const double> lambdas_sq, const Eigen::MatrixXcd& overlap,
                          std::span<const double> photons);

struct ConditionResult {
  Eigen::MatrixXcd overlap;
  double probability_weight = 0.0;  ///< rad/fs
  double probability = 0.0;         ///< per pulse
  double purity = 0.0;
  double rate = 0.0;                ///< events/s
  double K = 0.0;
  std::size_t modes_used = 0;       ///< Schmidt modes kept after truncation
};

/// Schmidt sums are truncated once the cumulative normalized weight exceeds
/// 1 - 1e-6. Throws DomainError for an all-vacuum comb.
ConditionResult conditioned_state(const SchmidtResult& schmidt, const CombState& comb,
                                  const CrystalPreset& crystal, const GateSpec& gate);

struct ExperimentResult {
  SchmidtResult schmidt;
  ConditionResult condition;
};

/// Kernel, decomposition and conditioned state for one operating point; the
/// gate's own spectral order selects the comb mode it is matched to.
ExperimentResult comb_subtraction_experiment(const CrystalPreset& crystal, const GateSpec& gate,
                                             const SignalBeamSpec& signal, const CombState& comb,
                                             const GridConfig& grid = {});

/// Rows m (subtraction modes), columns n (comb modes), values |O_mn|^2.
void write_overlap_csv(const Eigen::MatrixXcd& overlap, const std::string& path);

}  // namespace nlsub
