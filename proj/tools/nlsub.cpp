// nlsub: command-line front end for kernels, Schmidt decompositions, scans,
// the analytic model and comb subtraction experiments.

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlsub/conditioning.hpp"
#include "nlsub/config.hpp"
#include "nlsub/csv.hpp"
#include "nlsub/errors.hpp"
#include "nlsub/scan.hpp"
#include "nlsub/units.hpp"

namespace {

using nlohmann::json;
using namespace nlsub;

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct Options {
  std::string config_path;
  std::string output_dir;
  int threads = 0;
  std::string format = "csv";
};

RunConfig resolve_config(const Options& o) {
  RunConfig rc = o.config_path.empty() ? config_from_json(json::object()) : load_config(o.config_path);
  if (!o.output_dir.empty()) rc.output_dir = o.output_dir;
  return rc;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(rc.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + rc.output_dir + "': " + ec.message());
  return (std::filesystem::path(rc.output_dir) / name).string();
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_preset_list(const Options& o) {
  json list = json::array();
  for (const auto& name : preset_names()) {
    const auto c = CrystalConfig::from_preset(name);
    list.push_back({{"name", name},
                    {"phi_deg", c.phi_deg},
                    {"rho_deg", c.rho_deg},
                    {"theta_pm_deg", c.theta_pm_deg},
                    {"group_index_s", c.group_index_s},
                    {"group_index_c", c.group_index_c}});
  }
  if (o.format == "json") {
    std::cout << list.dump(2) << '\n';
  } else {
    std::cout << "name,phi_deg,rho_deg,theta_pm_deg,group_index_s,group_index_c\n";
    for (const auto& p : list)
      std::cout << p["name"].get<std::string>() << ',' << csv::format(p["phi_deg"].get<double>()) << ','
                << csv::format(p["rho_deg"].get<double>()) << ',' << csv::format(p["theta_pm_deg"].get<double>()) << ','
                << csv::format(p["group_index_s"].get<double>()) << ',' << csv::format(p["group_index_c"].get<double>()) << '\n';
  }
  return kOk;
}

int cmd_config(const Options& o, bool schema) {
  if (schema) {
    std::cout << config_schema().dump(2) << '\n';
    return kOk;
  }
  std::cout << config_to_json(resolve_config(o)).dump(2) << '\n';
  return kOk;
}

int cmd_kernel(const Options& o) {
  const RunConfig rc = resolve_config(o);
  const auto crystal = rc.crystal_preset();
  const auto gate = rc.gate_spec();
  const auto signal = rc.signal_spec();
  const KernelGrid k = build_kernel(crystal, gate, signal, rc.grid);
  const auto path = out_path(rc, "kernel.csv");
  write_kernel_csv(k, path);
  const auto& ax = k.axes();
  std::cerr << "kernel " << ax.omega_c.size() << "x" << ax.q.size() << "x" << ax.omega_s.size()
            << (ax.refined ? " (refined)" : "") << ", norm_sq " << k.norm_sq() << " -> " << path << '\n';
  return kOk;
}

int cmd_schmidt(const Options& o) {
  const RunConfig rc = resolve_config(o);
  const SchmidtResult r = decompose(build_kernel(rc.crystal_preset(), rc.gate_spec(), rc.signal_spec(), rc.grid));
  write_modes_csv(r, out_path(rc, "modes.csv"), rc.mode_count);
  const std::size_t shown = std::min<std::size_t>(rc.mode_count, r.rank());
  if (o.format == "json") {
    json doc = {{"K", r.K}, {"norm_sq", r.norm_sq},
                {"lambda_sq", std::vector<double>(r.lambdas_sq.begin(), r.lambdas_sq.begin() + shown)}};
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "K," << csv::format(r.K) << "\nnorm_sq," << csv::format(r.norm_sq) << "\nlambda_sq";
    for (std::size_t m = 0; m < shown; ++m) std::cout << ',' << csv::format(r.lambdas_sq[m]);
    std::cout << '\n';
  }
  return kOk;
}

int cmd_scan(const Options& o) {
  const RunConfig rc = resolve_config(o);
  const ScanReport report = run_scan(rc);
  std::cerr << report.rows.size() << " points, " << report.failed << " failed, " << std::fixed
            << std::setprecision(2) << report.wall_time_s << " s -> " << rc.output_dir << '\n';
  for (const auto& r : report.rows)
    if (!r.ok()) std::cerr << "  l=" << r.point.length << " um w=" << r.point.waist << " um: " << r.status << '\n';
  if (!report.rows.empty() && report.failed == report.rows.size()) return kNumerical;
  return kOk;
}

int cmd_gaussian(const Options& o) {
  const RunConfig rc = resolve_config(o);
  std::vector<GaussianRow> rows;
  for (const auto& p : rc.scan_points()) rows.push_back(gaussian_row(rc, p));
  if (o.format == "json") {
    json list = json::array();
    for (const auto& r : rows)
      list.push_back({{"l_um", r.point.length},
                      {"w_um", r.point.waist},
                      {"phi_deg", units::rad_to_deg(r.point.phi)},
                      {"gate_order", r.point.gate_order},
                      {"phi0_deg", units::rad_to_deg(r.phi0)},
                      {"l0_um", r.l0},
                      {"l_opt_um", number_or_null(r.l_opt)},
                      {"w_opt_um", number_or_null(r.w_opt)},
                      {"K_min", r.k_min},
                      {"K_closed_form", r.k_closed_form},
                      {"K_covariance", r.k_covariance},
                      {"lambda_sq_rad_per_fs", r.lambda_sq},
                      {"P_norm_m2_per_J", r.p_norm},
                      {"P_norm_mm2_per_J", r.p_norm * 1e6},
                      {"rate_hz", r.rate},
                      {"single_mode", r.single_mode_conditions}});
    std::cout << list.dump(2) << '\n';
  } else {
    const auto path = out_path(rc, "gaussian_table.csv");
    write_gaussian_table(rows, path);
    std::ifstream in(path);
    std::cout << in.rdbuf();
  }
  if (!rows.empty())
    std::cerr << "P_norm = " << rows.front().p_norm << " m^2/J = " << rows.front().p_norm * 1e6
              << " mm^2/J (subtraction probability per photon per unit gate fluence)\n";
  return kOk;
}

int cmd_subtract(const Options& o) {
  const RunConfig rc = resolve_config(o);
  const auto crystal = rc.crystal_preset();
  const auto gate = rc.gate_spec();
  const auto e = comb_subtraction_experiment(crystal, gate, rc.signal_spec(), rc.comb_state(), rc.grid);
  write_overlap_csv(e.condition.overlap, out_path(rc, "overlap.csv"));
  write_modes_csv(e.schmidt, out_path(rc, "modes.csv"), rc.mode_count);
  const std::size_t shown = std::min<std::size_t>(rc.mode_count, e.schmidt.rank());
  json summary = {{"K", e.condition.K},
                  {"purity", e.condition.purity},
                  {"probability_per_pulse", e.condition.probability},
                  {"rate_hz", e.condition.rate},
                  {"lambda_sq", std::vector<double>(e.schmidt.lambdas_sq.begin(),
                                                    e.schmidt.lambdas_sq.begin() + shown)}};
  write_json(summary, out_path(rc, "summary.json"));
  if (o.format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    std::cout << "K,purity,probability_per_pulse,rate_hz\n"
              << csv::format(e.condition.K) << ',' << csv::format(e.condition.purity) << ','
              << csv::format(e.condition.probability) << ',' << csv::format(e.condition.rate) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mode-selective photon subtraction by non-collinear sum-frequency generation"};
  app.set_version_flag("--version", NLSUB_VERSION);
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--output-dir", opt.output_dir, "Directory for artifacts (overrides output_dir)");
  app.add_option("--threads", opt.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", opt.format, "Console output format")->check(CLI::IsMember({"csv", "json"}));

  auto* preset = app.add_subcommand("preset", "Crystal presets");
  auto* preset_list = preset->add_subcommand("list", "List shipped presets");
  preset->require_subcommand(1);
  bool schema = false;
  auto* config = app.add_subcommand("config", "Print the resolved configuration");
  config->add_flag("--schema", schema, "Print keys, units and defaults instead");
  auto* kernel = app.add_subcommand("kernel", "Write the sampled transfer function to kernel.csv");
  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition; writes modes.csv");
  auto* scan = app.add_subcommand("scan", "Schmidt number scan; writes scan_table.csv and run_meta.json");
  auto* gaussian = app.add_subcommand("gaussian", "Analytic model table");
  auto* subtract = app.add_subcommand("subtract", "Comb subtraction; writes overlap.csv and summary.json");
  for (auto* sub : {preset, config, kernel, schmidt, scan, gaussian, subtract}) sub->fallthrough();
  preset_list->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }
  if (opt.threads > 0) omp_set_num_threads(opt.threads);

  try {
    if (*preset_list) return cmd_preset_list(opt);
    if (*config) return cmd_config(opt, schema);
    if (*kernel) return cmd_kernel(opt);
    if (*schmidt) return cmd_schmidt(opt);
    if (*scan) return cmd_scan(opt);
    if (*gaussian) return cmd_gaussian(opt);
    if (*subtract) return cmd_subtract(opt);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
