// Threads come from the OpenMP loop over chunks; Eigen must not nest its own.
#define EIGEN_DONT_PARALLELIZE
#include "dce/kernels.hpp"

#include <algorithm>
#include <cassert>

namespace dce::kernels {

namespace {

// Diagonal terms for rows [0, N). y and dy share the [Phi | Pi] layout with
// interleaved re/im, so row n spans 4N doubles: phi at [0, 2N), pi at [2N, 4N).
void add_diagonal(int N, std::span<const double> omega_sq, const RhsScalars& s, const double* y,
                  double* dy, int row) {
  const std::size_t stride = 4 * static_cast<std::size_t>(N);
  const double* yr = y + row * stride;
  double* dr = dy + row * stride;
  const double w = omega_sq[row] * s.inv_L;
  const int half = 2 * N;
  for (int k = 0; k < half; ++k) {
    const double ph = yr[k];
    const double pk = yr[half + k];
    dr[k] += pk * s.inv_L - s.half_rate * ph;
    dr[half + k] += -w * ph + s.half_rate * pk;
  }
}

}  // namespace

void coupled_rhs_reference(const Eigen::MatrixXd& c, std::span<const double> omega_sq,
                           const RhsScalars& s, std::span<const double> y, std::span<double> dy) {
  const int N = static_cast<int>(c.rows());
  const std::size_t cols = 4 * static_cast<std::size_t>(N);
  assert(y.size() == cols * N && dy.size() == cols * N);
  for (int n = 0; n < N; ++n) {
    for (std::size_t k = 0; k < cols; ++k) {
      double acc = 0.0;
      for (int m = 0; m < N; ++m) acc += c(n, m) * y[m * cols + k];
      dy[n * cols + k] = acc;
    }
  }
  for (int n = 0; n < N; ++n) add_diagonal(N, omega_sq, s, y.data(), dy.data(), n);
}

void coupled_rhs_parallel(const Eigen::MatrixXd& c, std::span<const double> omega_sq,
                          const RhsScalars& s, std::span<const double> y, std::span<double> dy) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int N = static_cast<int>(c.rows());
  const int cols = 4 * N;
  assert(y.size() == static_cast<std::size_t>(cols) * N && dy.size() == y.size());
  Eigen::Map<const RowMat> Y(y.data(), N, cols);
  Eigen::Map<RowMat> D(dy.data(), N, cols);
  const int chunks = (cols + kChunkColumns - 1) / kChunkColumns;

#pragma omp parallel for schedule(static)
  for (int b = 0; b < chunks; ++b) {
    const int k0 = b * kChunkColumns;
    const int w = std::min(kChunkColumns, cols - k0);
    D.middleCols(k0, w).noalias() = c * Y.middleCols(k0, w);
  }

#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) add_diagonal(N, omega_sq, s, y.data(), dy.data(), n);
}

}  // namespace dce::kernels
