#include "nlsub/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nlsub/csv.hpp"
#include "nlsub/errors.hpp"

namespace nlsub {

namespace {

constexpr std::size_t kBlockRows = 1024;
constexpr int kLanes = 16;
constexpr double kNoiseFloor = 1e-12;
constexpr double kDegenerateGap = 1e-9;

using RowBlock = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// fill(block, row_begin, row_end, out) writes unweighted rows into out.
template <class Fill>
Eigen::MatrixXcd accumulate_gram(const KernelAxes& axes, Fill fill) {
  const std::size_t nq = axes.q.size();
  const std::size_t ns = axes.omega_s.size();
  const std::size_t rows = axes.rows();
  const std::size_t blocks = (rows + kBlockRows - 1) / kBlockRows;
  const auto wc = axes.omega_c.weights();
  const auto wq = axes.q.weights();
  Eigen::VectorXd sqrt_ws(ns);
  for (std::size_t k = 0; k < ns; ++k) sqrt_ws(k) = std::sqrt(axes.omega_s.weights()[k]);

  std::vector<Eigen::MatrixXcd> lanes(kLanes, Eigen::MatrixXcd::Zero(ns, ns));
#pragma omp parallel for schedule(dynamic, 1)
  for (int lane = 0; lane < kLanes; ++lane) {
    RowBlock buf(kBlockRows, ns);
    for (std::size_t b = lane; b < blocks; b += kLanes) {
      const std::size_t r0 = b * kBlockRows;
      const std::size_t r1 = std::min(rows, r0 + kBlockRows);
      fill(r0, r1, buf.data());
      for (std::size_t r = r0; r < r1; ++r) {
        const double sw = std::sqrt(wc[r / nq] * wq[r % nq]);
        buf.row(r - r0) = buf.row(r - r0).cwiseProduct(sw * sqrt_ws.transpose());
      }
      const auto used = buf.topRows(r1 - r0);
      lanes[lane].selfadjointView<Eigen::Lower>().rankUpdate(used.adjoint());
    }
  }
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(ns, ns);
  for (const auto& l : lanes) g += l;
  const Eigen::MatrixXcd lower = g.triangularView<Eigen::Lower>();
  g = lower.selfadjointView<Eigen::Lower>();
  for (std::size_t k = 0; k < ns; ++k) g(k, k) = g(k, k).real();
  return g;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const KernelGrid& kernel) {
  const auto& axes = kernel.axes();
  const std::size_t ns = axes.omega_s.size();
  const auto* data = kernel.values().data();
  return accumulate_gram(axes, [&](std::size_t r0, std::size_t r1, std::complex<double>* out) {
    std::copy(data + r0 * ns, data + r1 * ns, out);
  });
}

Eigen::MatrixXcd gram_matrix(const TransferFunction& transfer, const KernelAxes& axes) {
  return accumulate_gram(axes, [&](std::size_t r0, std::size_t r1, std::complex<double>* out) {
    transfer.fill_rows(axes, r0, r1, out);
  });
}

double schmidt_number(std::span<const double> lambdas_sq) {
  double s = 0.0;
  double s2 = 0.0;
  for (double l : lambdas_sq) {
    s += l;
    s2 += l * l;
  }
  if (!(s2 > 0.0)) throw NumericalError("Schmidt number of an all-zero spectrum");
  return s * s / s2;
}

SchmidtResult decompose_gram(const Eigen::MatrixXcd& gw, const QuadGrid& omega_s, double norm_sq) {
  const auto n = static_cast<Eigen::Index>(omega_s.size());
  if (gw.rows() != n || gw.cols() != n) throw ShapeError("Gram matrix does not match the signal grid");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gw);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver failed on a " << n << "x" << n << " Gram matrix (diagonal range "
        << gw.diagonal().real().minCoeff() << " .. " << gw.diagonal().real().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }

  SchmidtResult r;
  r.omega_s = omega_s;
  r.norm_sq = norm_sq;
  // Eigen sorts ascending.
  r.raw_lambdas_sq.resize(n);
  for (Eigen::Index m = 0; m < n; ++m) r.raw_lambdas_sq[m] = std::max(0.0, es.eigenvalues()(n - 1 - m));
  const double top = r.raw_lambdas_sq.front();
  if (!(top > 0.0)) throw NumericalError("Gram matrix has no positive eigenvalue");

  Eigen::Index rank = 0;
  while (rank < n && r.raw_lambdas_sq[rank] > kNoiseFloor * top) ++rank;
  double total = 0.0;
  for (Eigen::Index m = 0; m < rank; ++m) total += r.raw_lambdas_sq[m];
  r.lambdas_sq.assign(n, 0.0);
  for (Eigen::Index m = 0; m < rank; ++m) r.lambdas_sq[m] = r.raw_lambdas_sq[m] / total;
  r.K = schmidt_number(std::span<const double>(r.lambdas_sq.data(), rank));

  const auto w = omega_s.weights();
  r.modes.resize(n, rank);
  for (Eigen::Index m = 0; m < rank; ++m) {
    Eigen::VectorXcd v = es.eigenvectors().col(n - 1 - m);
    for (Eigen::Index k = 0; k < n; ++k) v(k) /= std::sqrt(w[k]);
    Eigen::Index peak = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(v(k)) > std::abs(v(peak))) peak = k;
    v *= std::conj(v(peak)) / std::abs(v(peak));
    v(peak) = std::abs(v(peak));
    r.modes.col(m) = v;
  }

  r.degenerate.assign(rank, false);
  for (Eigen::Index m = 0; m + 1 < rank; ++m) {
    const double a = r.raw_lambdas_sq[m];
    const double b = r.raw_lambdas_sq[m + 1];
    if (a - b <= kDegenerateGap * a) r.degenerate[m] = r.degenerate[m + 1] = true;
  }
  return r;
}

SchmidtResult decompose(const KernelGrid& kernel) {
  return decompose_gram(gram_matrix(kernel), kernel.axes().omega_s, kernel.norm_sq());
}

SchmidtResult decompose(const TransferFunction& transfer, const KernelAxes& axes) {
  const Eigen::MatrixXcd g = gram_matrix(transfer, axes);
  return decompose_gram(g, axes.omega_s, g.trace().real());
}

std::vector<ScanRow> schmidt_number_scan(const CrystalPreset& crystal, const GateSpec& gate,
                                         const SignalBeamSpec& signal, const GridConfig& grid,
                                         std::span<const ScanPoint> points) {
  std::vector<ScanRow> rows(points.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(points.size()); ++p) {
    ScanRow& row = rows[p];
    row.point = points[p];
    try {
      CrystalPreset c = crystal;
      c.length = row.point.length;
      c.phi = row.point.phi;
      GateSpec g = gate;
      g.spectral.order = row.point.gate_order;
      SignalBeamSpec s = signal;
      s.waist = row.point.waist;
      const KernelAxes axes = derive_axes(c, g, s, grid);
      const SchmidtResult r = decompose(TransferFunction(c, g, s, grid.phase_matching), axes);
      row.K = r.K;
      row.lambda1_frac = r.lambdas_sq.front();
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace_if(msg.begin(), msg.end(), [](char ch) { return ch == ',' || ch == '\n' || ch == '"'; }, ';');
      row.status = "error: " + msg;
      row.K = row.lambda1_frac = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

void write_modes_csv(const SchmidtResult& result, const std::string& path, std::size_t mode_count) {
  const std::size_t m = std::min(mode_count, result.rank());
  auto out = csv::open(path);
  out << "omega_s";
  for (std::size_t j = 0; j < m; ++j) out << ",mode_" << j + 1;
  out << "\nlambda_sq";
  for (std::size_t j = 0; j < m; ++j) out << ',' << csv::format(result.lambdas_sq[j]);
  out << '\n';
  std::vector<double> row(m + 1);
  for (std::size_t k = 0; k < result.omega_s.size(); ++k) {
    row[0] = result.omega_s[k];
    for (std::size_t j = 0; j < m; ++j) row[j + 1] = result.modes(k, j).real();
    csv::write_row(out, row);
  }
  csv::finish(out, path);
}

}  // namespace nlsub
