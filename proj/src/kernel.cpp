#include "nlsub/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlsub/csv.hpp"
#include "nlsub/errors.hpp"
#include "nlsub/gaussian_model.hpp"
#include "nlsub/units.hpp"

namespace nlsub {

namespace {

constexpr std::size_t kMaxAxisPoints = 8192;
constexpr double kMarginalDefect = 1e-3;
// Largest step, in units of the factor's width, for the Gaussian factors.
constexpr double kGaussianStep = 0.5;

std::size_t round_up(std::size_t n, std::size_t multiple) { return (n + multiple - 1) / multiple * multiple; }

// Marginal amplitude standard deviation of Omega_s for the Gaussian surrogate.
double signal_marginal_width(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal) {
  const auto form =
      gaussian::build_covariance(gaussian::ModelParams::kernel_matched(crystal, gate.tau(), signal.waist));
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(form.u);
  const auto& ev = es.eigenvalues();
  const auto& vec = es.eigenvectors();
  double var = 0.0;
  for (int m = 0; m < 3; ++m)
    if (ev(m) > 1e-12 * ev.maxCoeff()) var += vec(2, m) * vec(2, m) / ev(m);
  return std::sqrt(var);
}

}  // namespace

void GridConfig::validate() const {
  for (auto n : {omega_c_points, q_points, omega_s_points})
    if (n < 2 || n > kMaxAxisPoints)
      throw GridError("axis point counts must lie in [2, " + std::to_string(kMaxAxisPoints) + "]");
  if (!(span_scale > 0.0)) throw GridError("grid span scale must be positive");
  if (!(min_points_per_lobe >= 2.0)) throw GridError("min_points_per_lobe must be at least 2");
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

TransferFunction::TransferFunction(const CrystalPreset& crystal, const GateSpec& gate,
                                   const SignalBeamSpec& signal, PhaseMatching phase_matching)
    : gate_spectral_(gate.spectral),
      signal_waist_(signal.waist),
      half_length_(0.5 * crystal.length),
      phase_matching_(phase_matching) {
  crystal.validate();
  gate.validate();
  signal.validate();
  const double tphi = std::tan(crystal.phi);
  const double sphi = std::sin(crystal.phi);
  const double cphi = std::cos(crystal.phi);
  const double ks = crystal.kp_s;
  gate_[0] = 1.0;
  gate_[1] = 0.0;
  gate_[2] = -1.0;
  signal_[0] = ks * tphi;
  signal_[1] = 1.0 / cphi;
  signal_[2] = -2.0 * ks * tphi;
  phase_[0] = crystal.kp_c - ks * cphi + ks * tphi * sphi;
  phase_[1] = tphi - std::tan(crystal.rho);
  phase_[2] = -2.0 * ks * tphi * sphi;
}

TransferFunction::Arguments TransferFunction::arguments(double oc, double q, double os) const {
  Arguments a;
  a.gate = gate_[0] * oc + gate_[2] * os;
  a.signal = signal_[0] * oc + signal_[1] * q + signal_[2] * os;
  a.phase = (phase_[0] * oc + phase_[1] * q + phase_[2] * os) * half_length_;
  return a;
}

double TransferFunction::operator()(double oc, double q, double os) const {
  const auto a = arguments(oc, q, os);
  const double tau = gate_spectral_.scale;
  const double alpha = std::sqrt(tau) * hermite_function(gate_spectral_.order, tau * (a.gate - gate_spectral_.center));
  const double x = signal_waist_ * a.signal;
  const double u = std::sqrt(signal_waist_) / std::pow(units::kPi, 0.25) * std::exp(-0.5 * x * x);
  const double pm = phase_matching_ == PhaseMatching::sinc
                        ? sinc(a.phase)
                        : std::exp(-gaussian::kSincGamma * a.phase * a.phase);
  return alpha * u * pm;
}

void TransferFunction::fill_rows(const KernelAxes& axes, std::size_t row_begin, std::size_t row_end,
                                 std::complex<double>* out) const {
  const std::size_t nq = axes.q.size();
  const std::size_t ns = axes.omega_s.size();
  const auto os = axes.omega_s.points();
  for (std::size_t r = row_begin; r < row_end; ++r) {
    const double oc = axes.omega_c[r / nq];
    const double q = axes.q[r % nq];
    std::complex<double>* row = out + (r - row_begin) * ns;
    for (std::size_t k = 0; k < ns; ++k) row[k] = (*this)(oc, q, os[k]);
  }
}

KernelAxes derive_axes(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal,
                       const GridConfig& config) {
  crystal.validate();
  gate.validate();
  signal.validate();
  config.validate();

  const double tau_g = gate.tau();
  const double order_factor = 1.0 + 0.5 * gate.order();
  const double gate_reach = 5.0 * order_factor / tau_g;
  const double base_s = std::max({gate_reach, 5.0 / signal.spectral_tau,
                                  5.0 * order_factor * signal_marginal_width(crystal, gate, signal)});
  const double base_c = base_s + gate_reach;
  const double cphi = std::cos(crystal.phi);
  const double base_q =
      cphi * (5.0 / signal.waist + crystal.kp_s * std::abs(std::tan(crystal.phi)) * (base_c + 2.0 * base_s));
  const double spans[3] = {config.span_scale * base_c, config.span_scale * base_q, config.span_scale * base_s};

  const TransferFunction tf(crystal, gate, signal, config.phase_matching);
  const double lobe_step = 2.0 * units::kPi / config.min_points_per_lobe;
  const char* names[3] = {"omega_c", "q_c", "omega_s"};
  std::size_t counts[3] = {config.omega_c_points, config.q_points, config.omega_s_points};
  bool refined = false;

  for (int i = 0; i < 3; ++i) {
    double h = 2.0 * spans[i];
    std::string limit = "span";
    auto tighten = [&](double coefficient, double width, double step, const char* what) {
      const double a = std::abs(coefficient) * width;
      if (a > 0.0 && step / a < h) {
        h = step / a;
        limit = what;
      }
    };
    tighten(tf.gate_coefficients()[i], tau_g * order_factor, kGaussianStep, "gate spectrum");
    tighten(tf.signal_coefficients()[i], signal.waist, kGaussianStep, "signal mode");
    tighten(tf.phase_coefficients()[i], 0.5 * crystal.length, lobe_step, "phase-matching lobe");
    const auto needed = static_cast<std::size_t>(std::ceil(2.0 * spans[i] / h)) + 1;
    if (needed <= counts[i]) continue;
    if (!config.auto_refine) {
      std::ostringstream msg;
      msg << names[i] << " axis has " << counts[i] << " points but the " << limit << " needs " << needed;
      if (limit == "phase-matching lobe") msg << " (fewer than " << config.min_points_per_lobe << " points across the sinc main lobe)";
      throw GridError(msg.str());
    }
    const std::size_t n = round_up(needed, 16);
    if (n > kMaxAxisPoints)
      throw GridError(std::string(names[i]) + " axis would need " + std::to_string(n) + " points");
    counts[i] = n;
    refined = true;
  }

  KernelAxes axes;
  axes.omega_c = QuadGrid::symmetric(spans[0], counts[0], names[0]);
  axes.q = QuadGrid::symmetric(spans[1], counts[1], names[1]);
  axes.omega_s = QuadGrid::symmetric(spans[2], counts[2], names[2]);
  axes.refined = refined;

  auto check = [](const HermiteGaussSpec& spec, const QuadGrid& grid) {
    const double defect = normalization_defect(sample_hermite_gauss(spec, grid.points()), grid);
    if (defect > kMarginalDefect)
      throw GridError(grid.axis() + " span too narrow: marginal normalization defect " + std::to_string(defect));
  };
  check(gate.spectral, axes.omega_s);
  check(gate.spectral, axes.omega_c);
  check(HermiteGaussSpec{0, signal.waist / cphi, 0.0}, axes.q);
  return axes;
}

KernelGrid::KernelGrid(KernelAxes axes, std::vector<std::complex<double>> values, bool is_real)
    : axes_(std::move(axes)), values_(std::move(values)), is_real_(is_real) {
  if (values_.size() != axes_.size()) throw ShapeError("kernel samples do not match the axes");
  const auto wc = axes_.omega_c.weights();
  const auto wq = axes_.q.weights();
  const auto ws = axes_.omega_s.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < wc.size(); ++i)
    for (std::size_t j = 0; j < wq.size(); ++j) {
      const std::complex<double>* row = &values_[index(i, j, 0)];
      double s = 0.0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (!std::isfinite(row[k].real()) || !std::isfinite(row[k].imag()))
          throw NumericalError("kernel sample is not finite");
        s += ws[k] * std::norm(row[k]);
      }
      total += wc[i] * wq[j] * s;
    }
  if (!(total > 0.0)) throw NumericalError("kernel norm vanishes on the grid");
  norm_sq_ = total;
}

KernelGrid KernelGrid::scaled(std::complex<double> s) const {
  std::vector<std::complex<double>> v(values_);
  for (auto& x : v) x *= s;
  return KernelGrid(axes_, std::move(v), is_real_ && s.imag() == 0.0);
}

KernelGrid build_kernel(const TransferFunction& transfer, const KernelAxes& axes) {
  const std::size_t nc = axes.omega_c.size();
  const std::size_t nq = axes.q.size();
  const std::size_t ns = axes.omega_s.size();
  std::vector<std::complex<double>> values(axes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nc); ++i) {
    const std::size_t r0 = static_cast<std::size_t>(i) * nq;
    transfer.fill_rows(axes, r0, r0 + nq, values.data() + r0 * ns);
  }
  return KernelGrid(axes, std::move(values), true);
}

KernelGrid build_kernel(const CrystalPreset& crystal, const GateSpec& gate, const SignalBeamSpec& signal,
                        const GridConfig& config) {
  const KernelAxes axes = derive_axes(crystal, gate, signal, config);
  return build_kernel(TransferFunction(crystal, gate, signal, config.phase_matching), axes);
}

void write_kernel_csv(const KernelGrid& kernel, const std::string& path) {
  auto out = csv::open(path);
  out << "omega_c,q_c,omega_s,re,im\n";
  const auto& ax = kernel.axes();
  for (std::size_t i = 0; i < ax.omega_c.size(); ++i)
    for (std::size_t j = 0; j < ax.q.size(); ++j)
      for (std::size_t k = 0; k < ax.omega_s.size(); ++k) {
        const auto v = kernel(i, j, k);
        csv::write_row(out, {ax.omega_c[i], ax.q[j], ax.omega_s[k], v.real(), v.imag()});
      }
  csv::finish(out, path);
}

SingleModeProfiles single_mode_profiles(const CrystalPreset& crystal, const GateSpec& gate,
                                        const SignalBeamSpec& signal, const GridConfig& config) {
  const KernelAxes axes = derive_axes(crystal, gate, signal, config);
  SingleModeProfiles p;
  p.omega_s = axes.omega_s;
  p.omega_c = axes.omega_c;
  p.q = axes.q;

  p.subtracted = sample_hermite_gauss(gate.spectral, p.omega_s.points());
  const double ns = std::sqrt(inner_product(p.subtracted, p.subtracted, p.omega_s));
  for (auto& v : p.subtracted) v /= ns;

  const double dk = crystal.kp_c_collinear - crystal.kp_s;
  const double tilt = crystal.phi - crystal.rho;
  const double half_l = 0.5 * crystal.length;
  const HermiteGaussSpec transverse{0, signal.waist, 0.0};
  const auto u = sample_hermite_gauss(transverse, p.q.points());
  p.converted.resize(p.omega_c.size() * p.q.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < p.omega_c.size(); ++i)
    for (std::size_t j = 0; j < p.q.size(); ++j) {
      const double v = u[j] * sinc((dk * p.omega_c[i] + tilt * p.q[j]) * half_l);
      p.converted[i * p.q.size() + j] = v;
      norm += p.omega_c.weights()[i] * p.q.weights()[j] * v * v;
    }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : p.converted) v *= scale;

  p.conditions_hold =
      gaussian::single_mode_conditions(gaussian::ModelParams::analytic(crystal, gate.tau(), signal.waist)).hold;
  return p;
}

}  // namespace nlsub
