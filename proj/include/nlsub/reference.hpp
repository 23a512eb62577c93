#pragma once

// Straightforward single-threaded versions of the parallel kernels, kept as
// test oracles and benchmark baselines.

#include <Eigen/Dense>

#include "nlsub/kernel.hpp"

namespace nlsub::reference {

/// Point-by-point triple loop; bit-identical to build_kernel.
KernelGrid build_kernel_serial(const TransferFunction& transfer, const KernelAxes& axes);

/// G_w[k, k'] = sqrt(w_k w_k') sum_r w_r conj(L[r, k]) L[r, k'], one entry at a time.
Eigen::MatrixXcd gram_matrix_serial(const KernelGrid& kernel);

}  // namespace nlsub::reference
