#pragma once

#include <span>

#include <Eigen/Dense>

namespace dce::kernels {

/// Per-call scalars of the coupled-mode right-hand side.
struct RhsScalars {
  double inv_L = 1.0;      ///< 1/L
  double half_rate = 0.0;  ///< Ldot/(2L)
};

/// Serial reference: explicit loops over rows, columns and the coupling sum
/// in natural order. Kept for testing the fast kernel.
///
/// `y` and `dy` are the N x 2N complex [Phi | Pi] block as 4N^2 doubles,
/// `c` the N x N coupling matrix, `omega_sq` the N squared frequencies.
void coupled_rhs_reference(const Eigen::MatrixXd& c, std::span<const double> omega_sq,
                           const RhsScalars& s, std::span<const double> y, std::span<double> dy);

/// OpenMP kernel: the coupling product runs as one real GEMM per fixed-width
/// column chunk, chunks distributed over threads. Chunk boundaries do not
/// depend on the thread count, so results are identical for any schedule.
void coupled_rhs_parallel(const Eigen::MatrixXd& c, std::span<const double> omega_sq,
                          const RhsScalars& s, std::span<const double> y, std::span<double> dy);

/// Real columns per GEMM chunk in the parallel kernel.
inline constexpr int kChunkColumns = 256;

}  // namespace dce::kernels
