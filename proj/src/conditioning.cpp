#include "nlsub/conditioning.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nlsub/csv.hpp"
#include "nlsub/errors.hpp"
#include "nlsub/gaussian_model.hpp"

namespace nlsub {

namespace {

constexpr double kTruncation = 1e-6;
constexpr double kSecondsPerFemtosecond = 1e15;  // rad/fs -> rad/s

void check_shapes(std::span<const double> lambdas_sq, const Eigen::MatrixXcd& o, std::span<const double> photons) {
  if (static_cast<std::size_t>(o.rows()) != lambdas_sq.size() || static_cast<std::size_t>(o.cols()) != photons.size())
    throw ShapeError("overlap matrix must be (Schmidt modes) x (comb modes)");
}

}  // namespace

double photons_from_squeezing(double squeezing_db, double finesse) {
  if (!(squeezing_db >= 0.0)) throw DomainError("squeezing must be non-negative (dB)");
  if (!(finesse > 0.0)) throw DomainError("finesse must be positive");
  const double s = std::sinh(squeezing_db * std::log(10.0) / 20.0);
  return s * s / finesse;
}

void CombState::validate() const {
  if (!(tau > 0.0)) throw DomainError("comb tau must be positive");
  if (!(finesse > 0.0)) throw DomainError("comb finesse must be positive");
  if (photons_comb.empty()) throw DomainError("comb has no modes");
  for (double n : photons_comb)
    if (!(n >= 0.0)) throw DomainError("comb photon numbers must be non-negative");
}

std::vector<double> CombState::photons_pulse() const {
  std::vector<double> n(photons_comb);
  for (auto& v : n) v /= finesse;
  return n;
}

CombState CombState::flat(double tau, std::size_t modes, double squeezing_db, double finesse) {
  CombState c;
  c.tau = tau;
  c.finesse = finesse;
  c.photons_comb.assign(modes, photons_from_squeezing(squeezing_db, 1.0));
  c.validate();
  return c;
}

CombState CombState::from_csv(const std::string& path, double tau, double finesse) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open comb file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,photons", 0) != 0)
    throw ConfigError("comb.csv_path", "expected header 'n,photons' in '" + path + "'");
  CombState c;
  c.tau = tau;
  c.finesse = finesse;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    long n = -1;
    double photons = 0.0;
    char comma = 0;
    if (!(row >> n >> comma >> photons) || comma != ',' || n < 0)
      throw ConfigError("comb.csv_path", path + ":" + std::to_string(lineno) + ": malformed row '" + line + "'");
    if (static_cast<std::size_t>(n) >= c.photons_comb.size()) c.photons_comb.resize(n + 1, 0.0);
    c.photons_comb[n] = photons;
  }
  c.validate();
  return c;
}

Eigen::MatrixXcd overlap_matrix(const Eigen::MatrixXcd& modes, const CombState& comb, const QuadGrid& grid) {
  comb.validate();
  if (static_cast<std::size_t>(modes.rows()) != grid.size())
    throw ShapeError("subtraction modes are not sampled on the given grid");
  const auto w = grid.weights();
  Eigen::MatrixXd s(grid.size(), comb.size());
  for (std::size_t n = 0; n < comb.size(); ++n) {
    const auto f = sample_hermite_gauss(comb.mode(n), grid.points());
    for (std::size_t k = 0; k < grid.size(); ++k) s(k, n) = w[k] * f[k];
  }
  return modes.adjoint() * s.cast<std::complex<double>>();
}

double probability_weight(std::span<const double> lambdas_sq, const Eigen::MatrixXcd& o,
                          std::span<const double> photons) {
  check_shapes(lambdas_sq, o, photons);
  double p = 0.0;
  for (Eigen::Index m = 0; m < o.rows(); ++m) {
    double row = 0.0;
    for (Eigen::Index n = 0; n < o.cols(); ++n) row += std::norm(o(m, n)) * photons[n];
    p += lambdas_sq[m] * row;
  }
  return p;
}

double purity(std::span<const double> lambdas_sq, const Eigen::MatrixXcd& o, std::span<const double> photons) {
  const double den = probability_weight(lambdas_sq, o, photons);
  if (!(den > 0.0)) throw DomainError("conditioning undefined: no photon-bearing overlap (sum lambda |O|^2 N = 0)");
  const Eigen::Map<const Eigen::VectorXd> nv(photons.data(), static_cast<Eigen::Index>(photons.size()));
  // C = O diag(N) O^H, C_mm' = sum_n O_mn O*_m'n N_n
  const Eigen::MatrixXcd c = o * nv.cast<std::complex<double>>().asDiagonal() * o.adjoint();
  double num = 0.0;
  for (Eigen::Index m = 0; m < o.rows(); ++m)
    for (Eigen::Index mp = 0; mp < o.rows(); ++mp) num += lambdas_sq[m] * lambdas_sq[mp] * std::norm(c(m, mp));
  return num / (den * den);
}

ConditionResult conditioned_state(const SchmidtResult& schmidt, const CombState& comb,
                                  const CrystalPreset& crystal, const GateSpec& gate) {
  comb.validate();
  const auto photons = comb.photons_pulse();
  double total_photons = 0.0;
  for (double n : photons) total_photons += n;
  if (!(total_photons > 0.0)) throw DomainError("conditioning undefined: the comb is in vacuum");

  std::size_t used = 0;
  double cumulative = 0.0;
  while (used < schmidt.rank() && cumulative <= 1.0 - kTruncation) cumulative += schmidt.lambdas_sq[used++];

  ConditionResult r;
  r.K = schmidt.K;
  r.modes_used = used;
  r.overlap = overlap_matrix(schmidt.modes.leftCols(used), comb, schmidt.omega_s);
  const std::span<const double> raw(schmidt.raw_lambdas_sq.data(), used);
  r.probability_weight = probability_weight(raw, r.overlap, photons);
  r.purity = purity(raw, r.overlap, photons);
  r.probability = gaussian::coupling_constant_sq(crystal, gate) * kSecondsPerFemtosecond * r.probability_weight;
  r.rate = r.probability * gate.rep_rate;
  return r;
}

ExperimentResult comb_subtraction_experiment(const CrystalPreset& crystal, const GateSpec& gate,
                                             const SignalBeamSpec& signal, const CombState& comb,
                                             const GridConfig& grid) {
  require_plane_wave_gate(gate, signal);
  ExperimentResult e;
  const KernelAxes axes = derive_axes(crystal, gate, signal, grid);
  e.schmidt = decompose(build_kernel(TransferFunction(crystal, gate, signal, grid.phase_matching), axes));
  e.condition = conditioned_state(e.schmidt, comb, crystal, gate);
  return e;
}

void write_overlap_csv(const Eigen::MatrixXcd& overlap, const std::string& path) {
  auto out = csv::open(path);
  out << "mode";
  for (Eigen::Index n = 0; n < overlap.cols(); ++n) out << ",comb_" << n + 1;
  out << '\n';
  std::vector<double> row(overlap.cols() + 1);
  for (Eigen::Index m = 0; m < overlap.rows(); ++m) {
    row[0] = static_cast<double>(m + 1);
    for (Eigen::Index n = 0; n < overlap.cols(); ++n) row[n + 1] = std::norm(overlap(m, n));
    csv::write_row(out, row);
  }
  csv::finish(out, path);
}

}  // namespace nlsub
