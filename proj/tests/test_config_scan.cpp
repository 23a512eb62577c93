#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlsub/config.hpp"
#include "nlsub/errors.hpp"
#include "nlsub/gaussian_model.hpp"
#include "nlsub/scan.hpp"
#include "support.hpp"

using namespace nlsub;
using nlohmann::json;
using testing::rel;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("nlsub_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& file = {}) const { return (file.empty() ? path : path / file).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

json small_scan() {
  return json::parse(R"({
    "grid": {"omega_c_points": 32, "q_points": 32, "omega_s_points": 32},
    "scan": {"axes": [
      {"variable": "length_mm", "min": 1, "max": 3, "count": 2},
      {"variable": "waist_um", "min": 60, "max": 120, "count": 3}]},
    "outputs": ["scan_table", "gaussian_table"]
  })");
}

}  // namespace

TEST_SUITE("config_scan") {

TEST_CASE("defaults") {
  const RunConfig rc = config_from_json(json::object());
  CHECK(rc.crystal.preset == "bbo-phi1-co");
  CHECK(rc.crystal.length_mm == 2.0);
  CHECK(rc.gate.tau_fs == 94.0);
  CHECK(rc.signal.waist_um == 107.7);
  CHECK(rc.comb.modes == 40);
  CHECK(rc.grid.omega_s_points == 128);
  CHECK(rc.outputs == std::vector<std::string>{"scan_table"});
  const auto c = rc.crystal_preset();
  const auto p = preset_bbo(1, Configuration::co);
  CHECK(rel(c.kp_s, p.kp_s) < 1e-12);
  CHECK(rel(c.kp_c, p.kp_c) < 1e-12);
  CHECK(rel(c.rho, p.rho) < 1e-12);
  CHECK(c.length == 2000.0);
  CHECK(rc.gate_spec().waist == 1000.0);
  CHECK(rc.gate_spec().energy == doctest::Approx(1e-8));
  CHECK(rc.gate_spec().rep_rate == 80e6);
  CHECK(rc.scan_points().size() == 1);
}

TEST_CASE("presets fill the crystal section, explicit keys override") {
  const auto rc = parse_config(R"({"crystal": {"preset": "bbo-phi5-counter", "length_mm": 4}})");
  CHECK(rc.crystal.phi_deg == -5.0);
  CHECK(rc.crystal.group_index_c == 1.735);
  CHECK(rc.crystal_preset().length == 4000.0);
  CHECK(rc.crystal_preset().configuration() == Configuration::counter);
}

TEST_CASE("validation errors name the field") {
  CHECK(config_error(R"({"crystal": {"length_mm": -2}})").find("crystal.length_mm") == 0);
  const auto both = config_error(R"({"gate": {"tau_fs": 90, "fwhm_nm": 6}})");
  CHECK(both.find("gate.fwhm_nm") == 0);
  CHECK(both.find("exactly one of tau_fs and fwhm_nm") != std::string::npos);
  CHECK(config_error(R"({"gate": {"tau": 90}})") == "gate.tau: unknown key");
  CHECK(config_error(R"({"colour": 1})") == "colour: unknown key");
  CHECK(config_error(R"({"crystal": {"preset": "lbo"}})").find("crystal.preset") == 0);
  CHECK(config_error(R"({"gate": {"order": 3}})").find("gate.order") == 0);
  CHECK(config_error(R"({"signal": {"waist_um": "wide"}})").find("signal.waist_um: expected a number") == 0);
  CHECK(config_error(R"({"outputs": ["plots"]})").find("outputs") == 0);
  CHECK(config_error(R"({"grid": {"q_points": 1}})").find("grid") == 0);
  CHECK(config_error(R"({"grid": {"phase_matching": "lorentz"}})").find("grid.phase_matching") == 0);
  CHECK(config_error(R"({"comb": {"distribution": "csv"}})").find("comb.csv_path") == 0);
}

TEST_CASE("parse errors carry line and column") {
  const auto msg = config_error("{\n  \"gate\": {\n    \"tau_fs\": 90,\n  }\n}");
  CHECK(msg.rfind("test.json:4:", 0) == 0);
  CHECK(msg.find("parse error") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("bandwidth can be given instead of tau") {
  const auto rc = parse_config(R"({"signal": {"fwhm_nm": 6, "center_nm": 795}, "gate": {"fwhm_nm": 6}})");
  CHECK(rel(rc.signal.tau_fs, 93.1161822864285265) < 1e-12);
  CHECK(rel(rc.gate.tau_fs, convert_bandwidth(6.0, 0.8)) < 1e-12);
}

TEST_CASE("scan axes") {
  SUBCASE("log spacing") {
    const auto rc = parse_config(R"({"scan": {"axes": [
      {"variable": "length_mm", "min": 1, "max": 100, "count": 3, "spacing": "log"}]}})");
    const auto v = rc.scan[0].values();
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(v[2] == 100.0);
  }
  SUBCASE("first axis outermost, other variables from the base") {
    const auto rc = config_from_json(small_scan());
    const auto p = rc.scan_points();
    REQUIRE(p.size() == 6);
    CHECK(p[0].length == 1000.0);
    CHECK(p[2].length == 1000.0);
    CHECK(p[3].length == 3000.0);
    CHECK(p[1].waist == 90.0);
    CHECK(p[4].waist == 90.0);
    for (const auto& x : p) CHECK(x.phi == rc.crystal_preset().phi);
  }
  SUBCASE("limits") {
    auto axis = R"({"variable": "waist_um", "min": 1, "max": 2, "count": 2})";
    const std::string four = std::string(R"({"scan": {"axes": [)") + axis + "," +
                             R"({"variable": "length_mm", "min": 1, "max": 2, "count": 2},)" +
                             R"({"variable": "phi_deg", "min": 1, "max": 2, "count": 2},)" +
                             R"({"variable": "gate_order", "min": 0, "max": 2, "count": 3}]}})";
    CHECK_FALSE(config_error(four).empty());
    CHECK_FALSE(config_error(std::string(R"({"scan": {"axes": [)") + axis + "," + axis + "]}}").empty());
    CHECK_FALSE(config_error(R"({"scan": {"axes": [{"variable": "waist_um", "min": 5, "max": 1, "count": 3}]}})").empty());
    CHECK_FALSE(config_error(R"({"scan": {"axes": [{"variable": "length_mm", "min": 0, "max": 1, "count": 3, "spacing": "log"}]}})").empty());
    CHECK_FALSE(config_error(R"({"scan": {"axes": [{"variable": "gate_order", "min": 0.5, "max": 2, "count": 2}]}})").empty());
    CHECK_FALSE(config_error(R"({"scan": {"axes": [{"variable": "tau_fs", "min": 1, "max": 2, "count": 2}]}})").empty());
  }
}

TEST_CASE("schema documents every key with its default") {
  const auto s = config_schema();
  CHECK(s["crystal"]["length_mm"]["unit"] == "mm");
  CHECK(s["crystal"]["length_mm"]["default"] == 2.0);
  CHECK(s["gate"]["tau_fs"]["default"] == 94.0);
  const auto doc = config_to_json(RunConfig{});
  for (const auto& [section, keys] : doc.items()) {
    if (!keys.is_object()) continue;
    for (const auto& [key, value] : keys.items()) {
      CAPTURE(section);
      CAPTURE(key);
      CHECK(s[section].contains(key));
    }
  }
}

TEST_CASE("resolved configuration round-trips") {
  const auto rc = config_from_json(small_scan());
  const auto doc = config_to_json(rc);
  CHECK(config_to_json(config_from_json(doc)) == doc);
  const auto preset = parse_config(R"({"crystal": {"preset": "bbo-phi5-co"}})");
  CHECK(config_to_json(config_from_json(config_to_json(preset))) == config_to_json(preset));
}

TEST_CASE("run_meta reproduces the scan") {
  TempDir a("scan_a"), b("scan_b");
  auto rc = config_from_json(small_scan());
  rc.output_dir = a.str();
  const auto report = run_scan(rc);
  CHECK(report.rows.size() == 6);
  CHECK(report.failed == 0);
  const auto table = slurp(a.str("scan_table.csv"));
  CHECK(table.rfind(std::string(kScanTableHeader) + "\n", 0) == 0);
  CHECK(slurp(a.str("gaussian_table.csv")).rfind(std::string(kGaussianTableHeader) + "\n", 0) == 0);

  const json meta = json::parse(slurp(a.str("run_meta.json")));
  CHECK(meta["run_meta"]["tool"] == "nlsub");
  CHECK(meta["run_meta"]["points"] == 6);
  CHECK(meta["run_meta"].contains("wall_time_s"));

  auto again = load_config(a.str("run_meta.json"));
  again.output_dir = b.str();
  run_scan(again);
  CHECK(slurp(b.str("scan_table.csv")) == table);
  CHECK(slurp(b.str("gaussian_table.csv")) == slurp(a.str("gaussian_table.csv")));
}

TEST_CASE("scan output does not depend on the thread count") {
  TempDir a("threads_1"), b("threads_4");
  auto rc = config_from_json(small_scan());
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  rc.output_dir = a.str();
  run_scan(rc);
  omp_set_num_threads(4);
  rc.output_dir = b.str();
  run_scan(rc);
  omp_set_num_threads(saved);
  CHECK(slurp(a.str("scan_table.csv")) == slurp(b.str("scan_table.csv")));
}

TEST_CASE("a single-point scan equals a direct decomposition") {
  TempDir dir("single");
  auto rc = config_from_json(json::parse(R"({"grid": {"omega_c_points": 40, "q_points": 40, "omega_s_points": 40}})"));
  rc.output_dir = dir.str();
  const auto report = run_scan(rc);
  REQUIRE(report.rows.size() == 1);
  const auto direct = decompose(build_kernel(rc.crystal_preset(), rc.gate_spec(), rc.signal_spec(), rc.grid));
  CHECK(report.rows[0].K == direct.K);
  CHECK(report.rows[0].lambda1_frac == direct.lambdas_sq[0]);
}

TEST_CASE("failed points are reported, not fatal") {
  TempDir dir("fail");
  auto doc = small_scan();
  doc["scan"]["axes"][0] = {{"variable", "phi_deg"}, {"min", 1}, {"max", 25}, {"count", 2}};
  auto rc = config_from_json(doc);
  rc.output_dir = dir.str();
  const auto report = run_scan(rc);
  CHECK(report.failed == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(report.rows[i].ok());
  const auto table = slurp(dir.str("scan_table.csv"));
  CHECK(table.find("error: ") != std::string::npos);
  CHECK(table.find("phi_max") != std::string::npos);
}

TEST_CASE("unwritable output directory is an I/O error") {
  TempDir dir("io");
  {
    std::ofstream f(dir.str("file"));
    f << "x";
  }
  auto rc = config_from_json(json::object());
  rc.output_dir = dir.str("file") + "/sub";
  CHECK_THROWS_AS(run_scan(rc), IoError);
}

TEST_CASE("analytic table row") {
  const auto rc = config_from_json(json::object());
  const auto row = gaussian_row(rc, rc.scan_points()[0]);
  CHECK(rel(row.l0, 1537.56288900765290) < 1e-9);
  CHECK(rel(row.l_opt, 11663.3812136126996) < 1e-9);
  CHECK(rel(row.k_closed_form, 1.31339012565785779) < 1e-9);
  CHECK(rel(row.p_norm, 0.206511739118165784) < 1e-9);
  CHECK(row.k_covariance >= 1.0);
  CHECK_FALSE(row.single_mode_conditions);
  const double n = photons_from_squeezing(4.2, 40.0);
  CHECK(rel(row.rate, gaussian::single_mode_rate(rc.crystal_preset(), rc.gate_spec(), n).rate) < 1e-12);

  auto collinear = rc;
  collinear.crystal.phi_deg = 0.0;
  const auto r0 = gaussian_row(collinear, collinear.scan_points()[0]);
  CHECK(std::isinf(r0.l_opt));
}

TEST_CASE("numerical optimal focus sits at the analytic w_opt") {
  // At l_opt each configuration's waist scan has its minimum within 25% of w_opt.
  for (int phi : {1, 5})
    for (auto conf : {Configuration::co, Configuration::counter}) {
      auto c = preset_bbo(phi, conf);
      const auto s = gaussian::characteristic_scales(gaussian::ModelParams::analytic(c, 94.0, 100.0));
      c.length = *s.l_opt;
      std::vector<ScanPoint> pts;
      for (double f : {0.64, 0.8, 1.0, 1.25, 1.5625}) pts.push_back({c.length, f * s.w_opt, c.phi, 0});
      const auto rows = schmidt_number_scan(c, testing::gate(), testing::signal(), testing::coarse(40), pts);
      std::size_t best = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].ok());
        if (rows[i].K < rows[best].K) best = i;
      }
      CAPTURE(phi);
      CHECK(best >= 1);
      CHECK(best <= 3);
    }
}

TEST_CASE("length-waist table has its minimum near l_opt and w_opt") {
  const auto rc = config_from_json(json::parse(R"({"grid": {"omega_c_points": 64, "q_points": 64, "omega_s_points": 64}})"));
  // Lengths and waists bracketing the analytic optimum.
  std::vector<ScanPoint> pts;
  for (double l : {5.0, 8.0, 11.7, 15.0, 20.0})
    for (double w : {60.0, 80.0, 107.7, 140.0, 180.0}) pts.push_back({l * 1000.0, w, rc.crystal_preset().phi, 0});
  const auto rows = schmidt_number_scan(rc.crystal_preset(), rc.gate_spec(), rc.signal_spec(), rc.grid, pts);
  const ScanRow* best = &rows[0];
  for (const auto& r : rows) {
    REQUIRE(r.ok());
    if (r.K < best->K) best = &r;
  }
  CHECK(std::abs(best->point.length / 11700.0 - 1.0) <= 0.30);
  CHECK(std::abs(best->point.waist / 107.7 - 1.0) <= 0.25);
}

}
