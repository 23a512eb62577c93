#include "nlsub/scan.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <omp.h>

#include "nlsub/csv.hpp"
#include "nlsub/errors.hpp"
#include "nlsub/gaussian_model.hpp"
#include "nlsub/units.hpp"

namespace nlsub {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

void write_scan_table(const std::vector<ScanRow>& rows, const std::string& path) {
  auto out = csv::open(path);
  out << kScanTableHeader << '\n';
  for (const auto& r : rows) {
    out << csv::format(r.point.length) << ',' << csv::format(r.point.waist) << ','
        << csv::format(units::rad_to_deg(r.point.phi)) << ',' << r.point.gate_order << ',' << csv::format(r.K)
        << ',' << csv::format(r.lambda1_frac) << ',' << r.status << '\n';
  }
  csv::finish(out, path);
}

GaussianRow gaussian_row(const RunConfig& config, const ScanPoint& point) {
  CrystalPreset crystal = config.crystal_preset();
  crystal.length = point.length;
  crystal.phi = point.phi;
  GateSpec gate = config.gate_spec();
  gate.spectral.order = point.gate_order;
  SignalBeamSpec signal = config.signal_spec();
  signal.waist = point.waist;

  GaussianRow r;
  r.point = point;
  const auto p = gaussian::ModelParams::analytic(crystal, gate.tau(), signal.waist);
  const auto s = gaussian::characteristic_scales(p);
  r.phi0 = s.phi0;
  r.l0 = s.l0;
  r.l_opt = s.l_opt.value_or(std::numeric_limits<double>::infinity());
  r.w_opt = s.w_opt;
  r.k_min = s.k_min;
  r.k_closed_form = gaussian::schmidt_number_closed_form(p);
  r.k_covariance = gaussian::covariance_schmidt_number(
      gaussian::build_covariance(gaussian::ModelParams::kernel_matched(crystal, gate.tau(), signal.waist)));
  const auto photons = config.comb_state().photons_pulse();
  const auto n = static_cast<std::size_t>(point.gate_order);
  const auto rate = gaussian::single_mode_rate(crystal, gate, n < photons.size() ? photons[n] : 0.0);
  r.lambda_sq = rate.lambda_sq;
  r.p_norm = rate.p_norm;
  r.rate = rate.rate;
  r.single_mode_conditions = rate.single_mode_conditions;
  return r;
}

void write_gaussian_table(const std::vector<GaussianRow>& rows, const std::string& path) {
  auto out = csv::open(path);
  out << kGaussianTableHeader << '\n';
  for (const auto& r : rows) {
    out << csv::format(r.point.length) << ',' << csv::format(r.point.waist) << ','
        << csv::format(units::rad_to_deg(r.point.phi)) << ',' << r.point.gate_order << ',';
    csv::write_row(out, {units::rad_to_deg(r.phi0), r.l0, r.l_opt, r.w_opt, r.k_min, r.k_closed_form,
                         r.k_covariance, r.lambda_sq, r.p_norm, r.p_norm * 1e6, r.rate,
                         r.single_mode_conditions ? 1.0 : 0.0});
  }
  csv::finish(out, path);
}

void write_run_meta(const RunConfig& config, const nlohmann::json& meta, const std::string& path) {
  nlohmann::json doc = config_to_json(config);
  doc["run_meta"] = meta;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

ScanReport run_scan(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(config.output_dir);
  const auto points = config.scan_points();

  ScanReport report;
  report.rows = schmidt_number_scan(config.crystal_preset(), config.gate_spec(), config.signal_spec(),
                                    config.grid, points);
  for (const auto& r : report.rows)
    if (!r.ok()) ++report.failed;
  if (config.wants("scan_table")) write_scan_table(report.rows, join(config.output_dir, "scan_table.csv"));
  if (config.wants("gaussian_table")) {
    std::vector<GaussianRow> rows;
    for (const auto& p : points) {
      try {
        rows.push_back(gaussian_row(config, p));
      } catch (const DomainError&) {
        // Already reported in the scan table; analytic columns stay empty.
        GaussianRow r;
        r.point = p;
        r.phi0 = r.l0 = r.l_opt = r.w_opt = r.k_min = r.k_closed_form = r.k_covariance = r.lambda_sq = r.p_norm =
            r.rate = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(r);
      }
    }
    write_gaussian_table(rows, join(config.output_dir, "gaussian_table.csv"));
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_run_meta(config,
                 {{"tool", "nlsub"},
                  {"version", NLSUB_VERSION},
                  {"command", "scan"},
                  {"points", points.size()},
                  {"failed", report.failed},
                  {"threads", omp_get_max_threads()},
                  {"wall_time_s", report.wall_time_s}},
                 join(config.output_dir, "run_meta.json"));
  return report;
}

}  // namespace nlsub
