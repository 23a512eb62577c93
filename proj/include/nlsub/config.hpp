#pragma once

// Run configuration: a JSON document in lab units (nm, mm, degrees, nJ, MHz),
// converted to internal units on load.

#include <string>
#include <vector>

#include "json.hpp"
#include "nlsub/beams.hpp"
#include "nlsub/conditioning.hpp"
#include "nlsub/dispersion.hpp"
#include "nlsub/kernel.hpp"
#include "nlsub/schmidt.hpp"

namespace nlsub {

/// Crystal parameters as written in the document. A preset fills every
/// field; explicit keys override it.
struct CrystalConfig {
  std::string preset = "bbo-phi1-co";
  double lambda_s_nm = 800.0;
  double group_index_s = 1.683;
  double group_index_c = 1.742;
  double group_index_c_collinear = 1.742;
  double rho_deg = 3.9;
  double phi_deg = 1.0;
  double theta_pm_deg = 29.4;
  double phi_max_deg = 19.0;
  double n_s = 1.66;
  double n_g = 1.66;
  double n_c = 1.66;
  double d_eff_pm_per_v = 2.0;
  double length_mm = 2.0;

  static CrystalConfig from_preset(const std::string& name);
  CrystalPreset resolve() const;
};

struct GateConfig {
  int order = 0;
  double tau_fs = 94.0;
  double waist_mm = 1.0;
  double energy_nj = 10.0;
  double rep_rate_mhz = 80.0;

  GateSpec resolve() const;
};

struct SignalConfig {
  double waist_um = 107.7;
  double tau_fs = 93.1;
  double center_nm = 795.0;  ///< carrier for fwhm_nm conversion

  SignalBeamSpec resolve() const;
};

struct CombConfig {
  std::string distribution = "flat-40";  ///< "flat-40" or "csv"
  std::size_t modes = 40;
  double squeezing_db = 4.2;
  double finesse = 40.0;
  std::string csv_path;
};

struct ScanAxis {
  std::string variable;  ///< length_mm, waist_um, phi_deg, gate_order
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
  std::string spacing = "linear";  ///< linear or log

  /// Values in the axis' own lab unit.
  std::vector<double> values() const;
};

/// Lab-unit document; internal-unit objects are derived on demand so that a
/// resolved configuration round-trips exactly.
struct RunConfig {
  CrystalConfig crystal;
  GateConfig gate;
  SignalConfig signal;
  CombConfig comb;
  GridConfig grid;
  std::vector<ScanAxis> scan;
  std::vector<std::string> outputs{"scan_table"};
  std::string output_dir = ".";
  std::size_t mode_count = 6;

  CrystalPreset crystal_preset() const { return crystal.resolve(); }
  GateSpec gate_spec() const { return gate.resolve(); }
  SignalBeamSpec signal_spec() const { return signal.resolve(); }
  CombState comb_state() const;
  /// Cartesian product of the scan axes, first axis outermost. Variables not
  /// swept take the base configuration's value.
  std::vector<ScanPoint> scan_points() const;
  bool wants(const std::string& output) const;
};

/// Throws ConfigError (parse errors carry line and column, validation errors
/// name the field) or IoError when the file cannot be read.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig config_from_json(const nlohmann::json& doc);

/// Fully resolved configuration; feeding it back to config_from_json
/// reproduces the same RunConfig.
nlohmann::json config_to_json(const RunConfig& config);

/// Keys, types, units and defaults.
nlohmann::json config_schema();

}  // namespace nlsub
