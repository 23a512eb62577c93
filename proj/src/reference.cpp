#include "nlsub/reference.hpp"

#include <cmath>

namespace nlsub::reference {

KernelGrid build_kernel_serial(const TransferFunction& transfer, const KernelAxes& axes) {
  std::vector<std::complex<double>> values;
  values.reserve(axes.size());
  for (std::size_t i = 0; i < axes.omega_c.size(); ++i)
    for (std::size_t j = 0; j < axes.q.size(); ++j)
      for (std::size_t k = 0; k < axes.omega_s.size(); ++k)
        values.emplace_back(transfer(axes.omega_c[i], axes.q[j], axes.omega_s[k]));
  return KernelGrid(axes, std::move(values), true);
}

Eigen::MatrixXcd gram_matrix_serial(const KernelGrid& kernel) {
  const auto& ax = kernel.axes();
  const std::size_t nc = ax.omega_c.size();
  const std::size_t nq = ax.q.size();
  const std::size_t ns = ax.omega_s.size();
  const auto wc = ax.omega_c.weights();
  const auto wq = ax.q.weights();
  const auto ws = ax.omega_s.weights();
  Eigen::MatrixXcd g(ns, ns);
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ns; ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nq; ++j) s += wc[i] * wq[j] * std::conj(kernel(i, j, a)) * kernel(i, j, b);
      g(a, b) = std::sqrt(ws[a] * ws[b]) * s;
    }
  return g;
}

}  // namespace nlsub::reference
