#pragma once

// Schmidt decomposition of the transfer function through the Gram operator
// on the signal-frequency axis.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "nlsub/kernel.hpp"

namespace nlsub {

struct SchmidtResult {
  QuadGrid omega_s;
  std::vector<double> lambdas_sq;      ///< normalized to unit sum, descending, noise floor zeroed
  std::vector<double> raw_lambdas_sq;  ///< clipped eigenvalues of the weighted Gram matrix, rad/fs
  Eigen::MatrixXcd modes;              ///< n_s x M, column m samples phi_m; M = modes above the floor
  std::vector<bool> degenerate;        ///< per mode: relative gap to a neighbour below 1e-9
  double K = 0.0;
  double norm_sq = 0.0;                ///< ||L||^2 on the grid

  std::size_t rank() const { return static_cast<std::size_t>(modes.cols()); }
};

/// Weighted Gram matrix W^1/2 G W^1/2 on the Omega_s grid. The (Omega_c, q_c)
/// rows are accumulated in fixed blocks over a fixed number of lanes, so the
/// result does not depend on the thread count.
Eigen::MatrixXcd gram_matrix(const KernelGrid& kernel);

/// Same contraction, generating kernel rows on the fly instead of storing them.
Eigen::MatrixXcd gram_matrix(const TransferFunction& transfer, const KernelAxes& axes);

/// Eigendecomposition of a weighted Gram matrix. norm_sq is carried through.
SchmidtResult decompose_gram(const Eigen::MatrixXcd& weighted_gram, const QuadGrid& omega_s, double norm_sq);

SchmidtResult decompose(const KernelGrid& kernel);
SchmidtResult decompose(const TransferFunction& transfer, const KernelAxes& axes);

/// (sum lambda^2)^2 / sum lambda^4
double schmidt_number(std::span<const double> lambdas_sq);

struct ScanPoint {
  double length = 0.0;  ///< um
  double waist = 0.0;   ///< um
  double phi = 0.0;     ///< rad
  int gate_order = 0;
};

struct ScanRow {
  ScanPoint point;
  double K = 0.0;
  double lambda1_frac = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// One decomposition per point, parallel over points, rows in input order.
/// Each point overrides crystal length and phi, signal waist and gate order.
/// Failures are recorded in the row's status.
std::vector<ScanRow> schmidt_number_scan(const CrystalPreset& crystal, const GateSpec& gate,
                                         const SignalBeamSpec& signal, const GridConfig& grid,
                                         std::span<const ScanPoint> points);

/// Header omega_s,mode_1..mode_M, then a lambda_sq row, then one row per grid
/// point (real parts; the modes of a real kernel are real after phase fixing).
void write_modes_csv(const SchmidtResult& result, const std::string& path, std::size_t mode_count = 6);

}  // namespace nlsub
