#include "nlsub/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsub/errors.hpp"
#include "nlsub/units.hpp"

namespace nlsub {

using nlohmann::json;

namespace {

const std::vector<std::string> kOutputs{"kernel", "modes", "scan_table", "gaussian_table", "condition_summary"};
const std::vector<std::string> kScanVariables{"length_mm", "waist_um", "phi_deg", "gate_order"};

// Strips conversion noise such as 3.9000000000000004.
double clean(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

// Reads the keys of one object and remembers them, so that finish() can reject
// anything it was never asked for.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    known_.insert(key);
    return doc_.contains(key);
  }

  bool number(const std::string& key, double& out) {
    if (!has(key)) return false;
    const auto& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
    return true;
  }

  template <class Int>
  bool integer(const std::string& key, Int& out) {
    if (!has(key)) return false;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < 0) throw ConfigError(field(key), "must be non-negative");
    out = static_cast<Int>(x);
    return true;
  }

  bool boolean(const std::string& key, bool& out) {
    if (!has(key)) return false;
    const auto& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    out = v.get<bool>();
    return true;
  }

  bool string(const std::string& key, std::string& out) {
    if (!has(key)) return false;
    const auto& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    out = v.get<std::string>();
    return true;
  }

  const json& child(const std::string& key) {
    known_.insert(key);
    return doc_.at(key);
  }

  void finish() const {
    for (const auto& item : doc_.items())
      if (!known_.count(item.key())) throw ConfigError(field(item.key()), "unknown key");
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

template <class F>
void rethrow_as(const std::string& field, F f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  } catch (const GridError& e) {
    throw ConfigError(field, e.what());
  }
}

CrystalConfig read_crystal(const json& doc) {
  Section s(doc, "crystal");
  std::string preset = "bbo-phi1-co";
  s.string("preset", preset);
  CrystalConfig c;
  rethrow_as("crystal.preset", [&] { c = CrystalConfig::from_preset(preset); });
  s.number("lambda_s_nm", c.lambda_s_nm);
  s.number("group_index_s", c.group_index_s);
  s.number("group_index_c", c.group_index_c);
  s.number("group_index_c_collinear", c.group_index_c_collinear);
  s.number("rho_deg", c.rho_deg);
  s.number("phi_deg", c.phi_deg);
  s.number("theta_pm_deg", c.theta_pm_deg);
  s.number("phi_max_deg", c.phi_max_deg);
  s.number("n_s", c.n_s);
  s.number("n_g", c.n_g);
  s.number("n_c", c.n_c);
  s.number("d_eff_pm_per_v", c.d_eff_pm_per_v);
  s.number("length_mm", c.length_mm);
  s.finish();

  require(c.length_mm > 0.0, "crystal.length_mm", "crystal length must be positive");
  require(c.lambda_s_nm > 0.0, "crystal.lambda_s_nm", "must be positive");
  require(c.group_index_s > 0.0, "crystal.group_index_s", "must be positive");
  require(c.group_index_c > c.group_index_s, "crystal.group_index_c", "must exceed group_index_s");
  require(c.group_index_c_collinear > c.group_index_s, "crystal.group_index_c_collinear",
          "must exceed group_index_s");
  require(c.rho_deg >= 0.0, "crystal.rho_deg", "walk-off angle must be non-negative");
  require(c.phi_max_deg > 0.0 && c.phi_max_deg < 90.0, "crystal.phi_max_deg", "must lie in (0, 90)");
  require(std::abs(c.phi_deg) < c.phi_max_deg, "crystal.phi_deg", "|phi| must be below phi_max_deg");
  require(c.n_s > 0.0, "crystal.n_s", "must be positive");
  require(c.n_g > 0.0, "crystal.n_g", "must be positive");
  require(c.n_c > 0.0, "crystal.n_c", "must be positive");
  require(c.d_eff_pm_per_v >= 0.0, "crystal.d_eff_pm_per_v", "must be non-negative");
  rethrow_as("crystal", [&] { c.resolve().validate(); });
  return c;
}

GateConfig read_gate(const json& doc, double carrier_um) {
  Section s(doc, "gate");
  GateConfig g;
  s.integer("order", g.order);
  double fwhm = 0.0;
  const bool has_tau = s.number("tau_fs", g.tau_fs);
  const bool has_fwhm = s.number("fwhm_nm", fwhm);
  s.number("waist_mm", g.waist_mm);
  s.number("energy_nj", g.energy_nj);
  s.number("rep_rate_mhz", g.rep_rate_mhz);
  s.finish();

  require(!(has_tau && has_fwhm), "gate.fwhm_nm", "give exactly one of tau_fs and fwhm_nm");
  if (has_fwhm) rethrow_as("gate.fwhm_nm", [&] { g.tau_fs = convert_bandwidth(fwhm, carrier_um); });
  require(g.order <= 2, "gate.order", "gate order must be 0, 1 or 2");
  require(g.tau_fs > 0.0, "gate.tau_fs", "must be positive");
  require(g.waist_mm > 0.0, "gate.waist_mm", "must be positive");
  require(g.energy_nj >= 0.0, "gate.energy_nj", "must be non-negative");
  require(g.rep_rate_mhz > 0.0, "gate.rep_rate_mhz", "must be positive");
  return g;
}

SignalConfig read_signal(const json& doc) {
  Section s(doc, "signal");
  SignalConfig g;
  double fwhm = 0.0;
  s.number("waist_um", g.waist_um);
  const bool has_tau = s.number("tau_fs", g.tau_fs);
  const bool has_fwhm = s.number("fwhm_nm", fwhm);
  s.number("center_nm", g.center_nm);
  s.finish();

  require(!(has_tau && has_fwhm), "signal.fwhm_nm", "give exactly one of tau_fs and fwhm_nm");
  require(g.center_nm > 0.0, "signal.center_nm", "must be positive");
  if (has_fwhm)
    rethrow_as("signal.fwhm_nm", [&] { g.tau_fs = convert_bandwidth(fwhm, units::nm_to_um(g.center_nm)); });
  require(g.waist_um > 0.0, "signal.waist_um", "must be positive");
  require(g.tau_fs > 0.0, "signal.tau_fs", "must be positive");
  return g;
}

CombConfig read_comb(const json& doc) {
  Section s(doc, "comb");
  CombConfig c;
  s.string("distribution", c.distribution);
  s.integer("modes", c.modes);
  s.number("squeezing_db", c.squeezing_db);
  s.number("finesse", c.finesse);
  s.string("csv_path", c.csv_path);
  s.finish();
  require(c.distribution == "flat-40" || c.distribution == "csv", "comb.distribution",
          "must be 'flat-40' or 'csv'");
  require(c.modes >= 1, "comb.modes", "must be at least 1");
  require(c.squeezing_db >= 0.0, "comb.squeezing_db", "must be non-negative");
  require(c.finesse > 0.0, "comb.finesse", "must be positive");
  require(c.distribution != "csv" || !c.csv_path.empty(), "comb.csv_path", "required for distribution 'csv'");
  return c;
}

GridConfig read_grid(const json& doc) {
  Section s(doc, "grid");
  GridConfig g;
  s.integer("omega_c_points", g.omega_c_points);
  s.integer("q_points", g.q_points);
  s.integer("omega_s_points", g.omega_s_points);
  s.number("span_scale", g.span_scale);
  s.boolean("auto_refine", g.auto_refine);
  s.number("min_points_per_lobe", g.min_points_per_lobe);
  std::string pm = "sinc";
  s.string("phase_matching", pm);
  s.finish();
  require(pm == "sinc" || pm == "gaussian", "grid.phase_matching", "must be 'sinc' or 'gaussian'");
  g.phase_matching = pm == "sinc" ? PhaseMatching::sinc : PhaseMatching::gaussian;
  rethrow_as("grid", [&] { g.validate(); });
  return g;
}

std::vector<ScanAxis> read_scan(const json& doc) {
  Section s(doc, "scan");
  std::vector<ScanAxis> axes;
  if (s.has("axes")) {
    const json& list = s.child("axes");
    require(list.is_array(), "scan.axes", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section a(list[i], "scan.axes[" + std::to_string(i) + "]");
      ScanAxis ax;
      require(a.string("variable", ax.variable), a.field("variable"), "required");
      require(a.number("min", ax.min), a.field("min"), "required");
      ax.max = ax.min;
      a.number("max", ax.max);
      a.integer("count", ax.count);
      a.string("spacing", ax.spacing);
      a.finish();
      require(std::find(kScanVariables.begin(), kScanVariables.end(), ax.variable) != kScanVariables.end(),
              a.field("variable"), "must be one of length_mm, waist_um, phi_deg, gate_order");
      require(ax.count >= 1, a.field("count"), "must be at least 1");
      require(ax.count == 1 || ax.min < ax.max, a.field("max"), "min must be below max for a swept axis");
      require(ax.spacing == "linear" || ax.spacing == "log", a.field("spacing"), "must be 'linear' or 'log'");
      require(ax.spacing != "log" || ax.min > 0.0, a.field("min"), "log spacing needs min > 0");
      for (const auto& other : axes)
        require(other.variable != ax.variable, a.field("variable"), "variable swept twice");
      if (ax.variable == "gate_order")
        for (double v : ax.values())
          require(v == std::round(v) && v >= 0.0 && v <= 2.0, a.field("min"),
                  "gate_order values must be the integers 0, 1 or 2");
      axes.push_back(ax);
    }
  }
  s.finish();
  require(axes.size() <= 3, "scan.axes", "at most 3 swept axes per run");
  return axes;
}

int line_of(const std::string& text, std::size_t byte, int* column) {
  int line = 1;
  std::size_t last = 0;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') {
      ++line;
      last = i + 1;
    }
  *column = static_cast<int>(byte - last);
  return line;
}

}  // namespace

CrystalConfig CrystalConfig::from_preset(const std::string& name) {
  const CrystalPreset p = preset_by_name(name);
  CrystalConfig c;
  c.preset = name;
  c.lambda_s_nm = clean(units::um_to_nm(p.lambda_s));
  c.group_index_s = clean(units::kp_to_group_index(p.kp_s));
  c.group_index_c = clean(units::kp_to_group_index(p.kp_c));
  c.group_index_c_collinear = clean(units::kp_to_group_index(p.kp_c_collinear));
  c.rho_deg = clean(units::rad_to_deg(p.rho));
  c.phi_deg = clean(units::rad_to_deg(p.phi));
  c.theta_pm_deg = clean(units::rad_to_deg(p.theta_pm));
  c.phi_max_deg = clean(units::rad_to_deg(p.phi_max));
  c.n_s = p.n_s;
  c.n_g = p.n_g;
  c.n_c = p.n_c;
  c.d_eff_pm_per_v = p.d_eff;
  c.length_mm = clean(units::um_to_mm(p.length));
  return c;
}

CrystalPreset CrystalConfig::resolve() const {
  CrystalPreset p;
  p.name = preset;
  p.lambda_s = units::nm_to_um(lambda_s_nm);
  p.lambda_c = p.lambda_s / 2.0;
  p.kp_s = units::group_index_to_kp(group_index_s);
  p.kp_c = units::group_index_to_kp(group_index_c);
  p.kp_c_collinear = units::group_index_to_kp(group_index_c_collinear);
  p.rho = units::deg_to_rad(rho_deg);
  p.phi = units::deg_to_rad(phi_deg);
  p.theta_pm = units::deg_to_rad(theta_pm_deg);
  p.phi_max = units::deg_to_rad(phi_max_deg);
  p.n_s = n_s;
  p.n_g = n_g;
  p.n_c = n_c;
  p.d_eff = d_eff_pm_per_v;
  p.length = units::mm_to_um(length_mm);
  return p;
}

GateSpec GateConfig::resolve() const {
  GateSpec g;
  g.spectral = {order, tau_fs, 0.0};
  g.waist = units::mm_to_um(waist_mm);
  g.energy = energy_nj * 1e-9;
  g.rep_rate = rep_rate_mhz * 1e6;
  return g;
}

SignalBeamSpec SignalConfig::resolve() const {
  SignalBeamSpec s;
  s.waist = waist_um;
  s.spectral_tau = tau_fs;
  return s;
}

std::vector<double> ScanAxis::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = spacing == "log" ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  if (count > 1) v.back() = max;
  return v;
}

CombState RunConfig::comb_state() const {
  if (comb.distribution == "csv") return CombState::from_csv(comb.csv_path, signal.tau_fs, comb.finesse);
  return CombState::flat(signal.tau_fs, comb.modes, comb.squeezing_db, comb.finesse);
}

std::vector<ScanPoint> RunConfig::scan_points() const {
  const CrystalPreset c = crystal_preset();
  std::vector<ScanPoint> points{{c.length, signal.waist_um, c.phi, gate.order}};
  for (const auto& axis : scan) {
    std::vector<ScanPoint> next;
    const auto values = axis.values();
    for (const auto& base : points)
      for (double v : values) {
        ScanPoint p = base;
        if (axis.variable == "length_mm") p.length = units::mm_to_um(v);
        if (axis.variable == "waist_um") p.waist = v;
        if (axis.variable == "phi_deg") p.phi = units::deg_to_rad(v);
        if (axis.variable == "gate_order") p.gate_order = static_cast<int>(std::lround(v));
        next.push_back(p);
      }
    points = std::move(next);
  }
  return points;
}

bool RunConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

RunConfig config_from_json(const json& doc) {
  Section top(doc, "");
  RunConfig rc;
  const json empty = json::object();
  auto section = [&](const char* key) -> const json& { return top.has(key) ? top.child(key) : empty; };
  rc.crystal = read_crystal(section("crystal"));
  rc.gate = read_gate(section("gate"), units::nm_to_um(rc.crystal.lambda_s_nm));
  rc.signal = read_signal(section("signal"));
  rc.comb = read_comb(section("comb"));
  rc.grid = read_grid(section("grid"));
  rc.scan = read_scan(section("scan"));
  if (top.has("outputs")) {
    const json& list = top.child("outputs");
    require(list.is_array(), "outputs", "expected an array of strings");
    rc.outputs.clear();
    for (const auto& o : list) {
      require(o.is_string(), "outputs", "expected an array of strings");
      const auto name = o.get<std::string>();
      require(std::find(kOutputs.begin(), kOutputs.end(), name) != kOutputs.end(), "outputs",
              "unknown artifact '" + name + "'");
      rc.outputs.push_back(name);
    }
  }
  top.string("output_dir", rc.output_dir);
  top.integer("mode_count", rc.mode_count);
  require(rc.mode_count >= 1, "mode_count", "must be at least 1");
  top.has("run_meta");  // written by run_scan; ignored on input
  top.finish();
  return rc;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int column = 0;
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1, &column);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column + 1 << ": parse error: " << e.what();
    throw ConfigError("", msg.str());
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

json config_to_json(const RunConfig& rc) {
  json j;
  const auto& c = rc.crystal;
  j["crystal"] = {{"preset", c.preset},
                  {"lambda_s_nm", c.lambda_s_nm},
                  {"group_index_s", c.group_index_s},
                  {"group_index_c", c.group_index_c},
                  {"group_index_c_collinear", c.group_index_c_collinear},
                  {"rho_deg", c.rho_deg},
                  {"phi_deg", c.phi_deg},
                  {"theta_pm_deg", c.theta_pm_deg},
                  {"phi_max_deg", c.phi_max_deg},
                  {"n_s", c.n_s},
                  {"n_g", c.n_g},
                  {"n_c", c.n_c},
                  {"d_eff_pm_per_v", c.d_eff_pm_per_v},
                  {"length_mm", c.length_mm}};
  j["gate"] = {{"order", rc.gate.order},
               {"tau_fs", rc.gate.tau_fs},
               {"waist_mm", rc.gate.waist_mm},
               {"energy_nj", rc.gate.energy_nj},
               {"rep_rate_mhz", rc.gate.rep_rate_mhz}};
  j["signal"] = {{"waist_um", rc.signal.waist_um}, {"tau_fs", rc.signal.tau_fs}, {"center_nm", rc.signal.center_nm}};
  j["comb"] = {{"distribution", rc.comb.distribution},
               {"modes", rc.comb.modes},
               {"squeezing_db", rc.comb.squeezing_db},
               {"finesse", rc.comb.finesse},
               {"csv_path", rc.comb.csv_path}};
  j["grid"] = {{"omega_c_points", rc.grid.omega_c_points},
               {"q_points", rc.grid.q_points},
               {"omega_s_points", rc.grid.omega_s_points},
               {"span_scale", rc.grid.span_scale},
               {"auto_refine", rc.grid.auto_refine},
               {"min_points_per_lobe", rc.grid.min_points_per_lobe},
               {"phase_matching", rc.grid.phase_matching == PhaseMatching::sinc ? "sinc" : "gaussian"}};
  json axes = json::array();
  for (const auto& a : rc.scan)
    axes.push_back({{"variable", a.variable}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"spacing", a.spacing}});
  j["scan"] = {{"axes", axes}};
  j["outputs"] = rc.outputs;
  j["output_dir"] = rc.output_dir;
  j["mode_count"] = rc.mode_count;
  return j;
}

json config_schema() {
  auto field = [](const char* type, const char* unit, json def, const char* doc) {
    json f = {{"type", type}, {"default", std::move(def)}, {"description", doc}};
    if (unit[0]) f["unit"] = unit;
    return f;
  };
  const RunConfig d;
  const auto& c = d.crystal;
  json s;
  s["crystal"] = {
      {"preset", field("string", "", c.preset, "bbo-phi1-co, bbo-phi1-counter, bbo-phi5-co, bbo-phi5-counter; fills every crystal key")},
      {"lambda_s_nm", field("number", "nm", c.lambda_s_nm, "signal and gate carrier wavelength")},
      {"group_index_s", field("number", "", c.group_index_s, "c k'_s of the ordinary fundamental")},
      {"group_index_c", field("number", "", c.group_index_c, "c k'_c of the up-converted field, used by the kernel")},
      {"group_index_c_collinear", field("number", "", c.group_index_c_collinear, "c k'_c in the collinear limit, used by the analytic model")},
      {"rho_deg", field("number", "deg", c.rho_deg, "walk-off angle, >= 0")},
      {"phi_deg", field("number", "deg", c.phi_deg, "signed non-collinear angle; same sign as rho is the co configuration")},
      {"theta_pm_deg", field("number", "deg", c.theta_pm_deg, "phase-matching angle (metadata)")},
      {"phi_max_deg", field("number", "deg", c.phi_max_deg, "largest allowed |phi|")},
      {"n_s", field("number", "", c.n_s, "refractive index, signal")},
      {"n_g", field("number", "", c.n_g, "refractive index, gate")},
      {"n_c", field("number", "", c.n_c, "refractive index, up-converted")},
      {"d_eff_pm_per_v", field("number", "pm/V", c.d_eff_pm_per_v, "effective nonlinearity, chi2 = 2 d_eff")},
      {"length_mm", field("number", "mm", c.length_mm, "crystal length")}};
  s["gate"] = {{"order", field("integer", "", d.gate.order, "Hermite-Gauss order of the gate spectrum, 0..2")},
               {"tau_fs", field("number", "fs", d.gate.tau_fs, "spectral width parameter; exclusive with fwhm_nm")},
               {"fwhm_nm", field("number", "nm", nullptr, "intensity FWHM at lambda_s_nm; exclusive with tau_fs")},
               {"waist_mm", field("number", "mm", d.gate.waist_mm, "transverse width w_g")},
               {"energy_nj", field("number", "nJ", d.gate.energy_nj, "pulse energy")},
               {"rep_rate_mhz", field("number", "MHz", d.gate.rep_rate_mhz, "repetition rate")}};
  s["signal"] = {{"waist_um", field("number", "um", d.signal.waist_um, "transverse width w_s")},
                 {"tau_fs", field("number", "fs", d.signal.tau_fs, "comb mode width tau_s; exclusive with fwhm_nm")},
                 {"fwhm_nm", field("number", "nm", nullptr, "comb intensity FWHM at center_nm; exclusive with tau_fs")},
                 {"center_nm", field("number", "nm", d.signal.center_nm, "carrier for fwhm_nm")}};
  s["comb"] = {{"distribution", field("string", "", d.comb.distribution, "flat-40 or csv")},
               {"modes", field("integer", "", d.comb.modes, "number of equally occupied modes for flat-40")},
               {"squeezing_db", field("number", "dB", d.comb.squeezing_db, "squeezing of each flat-40 mode")},
               {"finesse", field("number", "", d.comb.finesse, "cavity finesse; per-pulse photons = comb photons / finesse")},
               {"csv_path", field("string", "", d.comb.csv_path, "file with header n,photons (comb photons per mode)")}};
  s["grid"] = {{"omega_c_points", field("integer", "", d.grid.omega_c_points, "points on the Omega_c axis")},
               {"q_points", field("integer", "", d.grid.q_points, "points on the q_c axis")},
               {"omega_s_points", field("integer", "", d.grid.omega_s_points, "points on the Omega_s axis")},
               {"span_scale", field("number", "", d.grid.span_scale, "multiplier on the derived spans")},
               {"auto_refine", field("boolean", "", d.grid.auto_refine, "raise point counts to meet the resolution rules")},
               {"min_points_per_lobe", field("number", "", d.grid.min_points_per_lobe, "points across the sinc main lobe")},
               {"phase_matching", field("string", "", "sinc", "sinc or gaussian (exp(-0.193 x^2) surrogate)")}};
  s["scan"] = {{"axes", {{"type", "array"},
                         {"default", json::array()},
                         {"description", "up to 3 axes, first outermost"},
                         {"items",
                          {{"variable", field("string", "", nullptr, "length_mm, waist_um, phi_deg or gate_order")},
                           {"min", field("number", "", nullptr, "first value")},
                           {"max", field("number", "", nullptr, "last value; defaults to min")},
                           {"count", field("integer", "", 1, "number of values")},
                           {"spacing", field("string", "", "linear", "linear or log")}}}}}};
  s["outputs"] = field("array", "", d.outputs, "kernel, modes, scan_table, gaussian_table, condition_summary");
  s["output_dir"] = field("string", "", d.output_dir, "directory for artifacts");
  s["mode_count"] = field("integer", "", d.mode_count, "modes written to modes.csv");
  return s;
}

}  // namespace nlsub
