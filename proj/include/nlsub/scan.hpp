#pragma once

#include <string>
#include <vector>

#include "nlsub/config.hpp"

namespace nlsub {

struct ScanReport {
  std::vector<ScanRow> rows;
  std::size_t failed = 0;
  double wall_time_s = 0.0;
};

/// Runs schmidt_number_scan over config.scan_points() and writes the selected
/// artifacts (scan_table.csv, gaussian_table.csv) plus run_meta.json into
/// config.output_dir. I/O failures throw IoError; per-point failures are
/// reported in the table.
ScanReport run_scan(const RunConfig& config);

/// Header of scan_table.csv.
inline constexpr const char* kScanTableHeader = "l_um,w_um,phi_deg,gate_order,K,lambda1_frac,status";

void write_scan_table(const std::vector<ScanRow>& rows, const std::string& path);

/// Analytic quantities for one operating point.
struct GaussianRow {
  ScanPoint point;
  double phi0 = 0.0;   ///< rad
  double l0 = 0.0;     ///< um
  double l_opt = 0.0;  ///< um, +inf when phi = 0
  double w_opt = 0.0;  ///< um
  double k_min = 0.0;
  double k_closed_form = 0.0;
  double k_covariance = 0.0;  ///< exact-trigonometry Gaussian kernel with the preset's own k'_c
  double lambda_sq = 0.0;     ///< rad/fs
  double p_norm = 0.0;        ///< m^2/J
  double rate = 0.0;          ///< events/s for the comb mode matched to the gate order
  bool single_mode_conditions = false;
};

GaussianRow gaussian_row(const RunConfig& config, const ScanPoint& point);

inline constexpr const char* kGaussianTableHeader =
    "l_um,w_um,phi_deg,gate_order,phi0_deg,l0_um,l_opt_um,w_opt_um,K_min,K_closed_form,K_covariance,"
    "lambda_sq,P_norm_m2_per_J,P_norm_mm2_per_J,rate_hz,single_mode";

void write_gaussian_table(const std::vector<GaussianRow>& rows, const std::string& path);

/// Resolved config plus a "run_meta" object (tool version, wall time, threads).
void write_run_meta(const RunConfig& config, const nlohmann::json& meta, const std::string& path);

}  // namespace nlsub
