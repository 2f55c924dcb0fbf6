#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dce/trajectory.hpp"

namespace dce {

using cplx = std::complex<double>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Frequencies of the truncated Dirichlet mode tower. Mode numbers are
/// 1-based (n = 1..N); `mass_sq` adds a constant to every squared frequency,
/// which is how transverse momenta and field mass enter a 3+1 sector.
struct ModeSpectrum {
  int N = 0;
  double mass_sq = 0.0;

  double omega_sq(int n) const;
  /// sqrt(omega_sq); exactly n*pi when mass_sq == 0.
  double omega(int n) const;
  std::vector<double> omega_sq_table() const;
};

/// One phase-space solution U = (phi_1, pi_1, phi_2, pi_2, ...).
struct ModeStateVector {
  std::vector<cplx> phi;
  std::vector<cplx> pi;

  ModeStateVector() = default;
  explicit ModeStateVector(int N) : phi(N), pi(N) {}

  int size() const { return static_cast<int>(phi.size()); }
  ModeStateVector conj() const;
  /// Flattened U in interleaved order, length 2N.
  std::vector<cplx> interleaved() const;
  static ModeStateVector from_interleaved(std::span<const cplx> u);
};

/// Fundamental solution: N complex basis solutions u^(I) at time tau.
///
/// Storage is a row-major N x 2N complex block [Phi | Pi]: row n holds mode
/// n+1 and column I (resp. N+I) holds phi (resp. pi) of basis solution I+1.
/// Viewed as doubles this is an N x 4N row-major real matrix, which lets the
/// mode coupling act on every column with a single matrix product.
class BasisMatrix {
 public:
  BasisMatrix() = default;
  explicit BasisMatrix(int N, double tau = 0.0);

  int size() const { return N_; }
  double tau = 0.0;

  cplx& phi(int n, int I) { return data_(n, I); }
  cplx phi(int n, int I) const { return data_(n, I); }
  cplx& pi(int n, int I) { return data_(n, N_ + I); }
  cplx pi(int n, int I) const { return data_(n, N_ + I); }

  auto phi_block() { return data_.leftCols(N_); }
  auto phi_block() const { return data_.leftCols(N_); }
  auto pi_block() { return data_.rightCols(N_); }
  auto pi_block() const { return data_.rightCols(N_); }

  ModeStateVector column(int I) const;
  void set_column(int I, const ModeStateVector& u);

  /// 4N^2 doubles: the real view used by the integrator.
  std::span<double> flat();
  std::span<const double> flat() const;

  RowMatrixXcd& data() { return data_; }
  const RowMatrixXcd& data() const { return data_; }

 private:
  int N_ = 0;
  RowMatrixXcd data_;
};

/// Mode-mixing kernel c[n][m] at one instant (0-based indices, mode n+1).
struct CouplingMatrix {
  Eigen::MatrixXd c;
};

/// The two time-independent parity masks of the coupling:
///   odd[n][m]  = 2 nm/(m^2-n^2) ((-1)^{n+m} - 1)
///   sign[n][m] = 2 nm/(m^2-n^2) (-1)^{n+m}
/// so that c = (fdot/L) odd + (Ldot/L) sign. Both are exactly antisymmetric.
class CouplingMasks {
 public:
  explicit CouplingMasks(int N);
  int size() const { return static_cast<int>(odd_.rows()); }
  void combine(double fdot_over_L, double Ldot_over_L, Eigen::MatrixXd& out) const;

 private:
  Eigen::MatrixXd odd_;
  Eigen::MatrixXd sign_;
};

CouplingMatrix coupling(const TrajectorySample& sample, int N);

enum class KernelKind { reference, parallel };

/// Right-hand side of the truncated Hamilton equations for all basis columns:
///   phi_n' = pi_n/L - (Ldot/2L) phi_n + sum_m c[n][m] phi_m
///   pi_n'  = -omega_n^2 phi_n/L + (Ldot/2L) pi_n + sum_m c[n][m] pi_m
/// The trajectory must outlive the system.
class ModeSystem {
 public:
  ModeSystem(const Trajectory& trajectory, ModeSpectrum spectrum,
             KernelKind kernel = KernelKind::parallel);

  int size() const { return spectrum_.N; }
  const ModeSpectrum& spectrum() const { return spectrum_; }
  const Trajectory& trajectory() const { return *trajectory_; }

  void rhs(double tau, const BasisMatrix& state, BasisMatrix& deriv) const;
  void rhs(double tau, std::span<const double> y, std::span<double> dydt) const;

 private:
  const Trajectory* trajectory_;
  ModeSpectrum spectrum_;
  KernelKind kernel_;
  CouplingMasks masks_;
  std::vector<double> omega_sq_;
};

/// In basis at tau0 (static cavity of unit width):
///   phi_n^(I) = delta_nI / sqrt(K_I),  pi_n^(I) = -i sqrt(K_I) delta_nI.
BasisMatrix in_basis(const ModeSpectrum& spectrum, double tau0);

/// Analytic out basis for a static cavity of width L_final after tau_ref:
/// column J carries the same initial data as the in basis, rotating with the
/// physical frequency K_J / L_final.
class OutBasis {
 public:
  OutBasis(ModeSpectrum spectrum, double tau_ref, double L_final);

  int size() const { return spectrum_.N; }
  double tau_ref() const { return tau_ref_; }
  double L_final() const { return L_final_; }
  double frequency(int J) const;  ///< J is 0-based

  ModeStateVector column(int J, double tau) const;
  BasisMatrix at(double tau) const;
  /// e^{-i K_J (tau - tau_ref)/L_final}
  cplx phase(int J, double tau) const;
  const ModeSpectrum& spectrum() const { return spectrum_; }

 private:
  ModeSpectrum spectrum_;
  double tau_ref_;
  double L_final_;
};

}  // namespace dce
