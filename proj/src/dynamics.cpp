#include "dce/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "dce/errors.hpp"
#include "dce/kernels.hpp"

namespace dce {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

void check_N(int N) {
  if (N < 1) throw InvalidArgument("dynamics", "truncation N must be at least 1");
}

}  // namespace

double ModeSpectrum::omega_sq(int n) const {
  const double k = n * kPi;
  return k * k + mass_sq;
}

double ModeSpectrum::omega(int n) const {
  if (mass_sq == 0.0) return n * kPi;
  return std::sqrt(omega_sq(n));
}

std::vector<double> ModeSpectrum::omega_sq_table() const {
  std::vector<double> out(N);
  for (int n = 0; n < N; ++n) out[n] = omega_sq(n + 1);
  return out;
}

ModeStateVector ModeStateVector::conj() const {
  ModeStateVector out(size());
  for (int n = 0; n < size(); ++n) {
    out.phi[n] = std::conj(phi[n]);
    out.pi[n] = std::conj(pi[n]);
  }
  return out;
}

std::vector<cplx> ModeStateVector::interleaved() const {
  std::vector<cplx> u(2 * phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    u[2 * n] = phi[n];
    u[2 * n + 1] = pi[n];
  }
  return u;
}

ModeStateVector ModeStateVector::from_interleaved(std::span<const cplx> u) {
  if (u.size() % 2 != 0) throw InvalidArgument("dynamics", "interleaved state has odd length");
  ModeStateVector out(static_cast<int>(u.size() / 2));
  for (int n = 0; n < out.size(); ++n) {
    out.phi[n] = u[2 * n];
    out.pi[n] = u[2 * n + 1];
  }
  return out;
}

BasisMatrix::BasisMatrix(int N, double tau_) : tau(tau_), N_(N) {
  check_N(N);
  data_ = RowMatrixXcd::Zero(N, 2 * N);
}

ModeStateVector BasisMatrix::column(int I) const {
  ModeStateVector u(N_);
  for (int n = 0; n < N_; ++n) {
    u.phi[n] = phi(n, I);
    u.pi[n] = pi(n, I);
  }
  return u;
}

void BasisMatrix::set_column(int I, const ModeStateVector& u) {
  if (u.size() != N_) throw InvalidArgument("dynamics", "column length does not match N");
  for (int n = 0; n < N_; ++n) {
    phi(n, I) = u.phi[n];
    pi(n, I) = u.pi[n];
  }
}

std::span<double> BasisMatrix::flat() {
  return {reinterpret_cast<double*>(data_.data()), 2 * static_cast<std::size_t>(data_.size())};
}

std::span<const double> BasisMatrix::flat() const {
  return {reinterpret_cast<const double*>(data_.data()),
          2 * static_cast<std::size_t>(data_.size())};
}

CouplingMasks::CouplingMasks(int N) {
  check_N(N);
  odd_ = Eigen::MatrixXd::Zero(N, N);
  sign_ = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double n = i + 1, m = j + 1;
      const double base = 2.0 * m * n / (m * m - n * n);
      const double parity = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      odd_(i, j) = base * (parity - 1.0);
      odd_(j, i) = -odd_(i, j);
      sign_(i, j) = base * parity;
      sign_(j, i) = -sign_(i, j);
    }
  }
}

void CouplingMasks::combine(double fdot_over_L, double Ldot_over_L, Eigen::MatrixXd& out) const {
  const int N = size();
  out.resize(N, N);
  // Upper triangle computed once and mirrored so antisymmetry is bit-exact.
  for (int i = 0; i < N; ++i) {
    out(i, i) = 0.0;
    for (int j = i + 1; j < N; ++j) {
      const double v = fdot_over_L * odd_(i, j) + Ldot_over_L * sign_(i, j);
      out(i, j) = v;
      out(j, i) = -v;
    }
  }
}

CouplingMatrix coupling(const TrajectorySample& sample, int N) {
  if (!(sample.L > 0.0)) throw InvalidArgument("dynamics", "cavity width must be positive");
  CouplingMatrix out;
  CouplingMasks(N).combine(sample.fdot / sample.L, sample.Ldot / sample.L, out.c);
  return out;
}

ModeSystem::ModeSystem(const Trajectory& trajectory, ModeSpectrum spectrum, KernelKind kernel)
    : trajectory_(&trajectory),
      spectrum_(spectrum),
      kernel_(kernel),
      masks_(spectrum.N),
      omega_sq_(spectrum.omega_sq_table()) {}

void ModeSystem::rhs(double tau, const BasisMatrix& state, BasisMatrix& deriv) const {
  if (state.size() != spectrum_.N) throw InvalidArgument("dynamics", "state size does not match N");
  if (deriv.size() != spectrum_.N) deriv = BasisMatrix(spectrum_.N, tau);
  deriv.tau = tau;
  rhs(tau, state.flat(), deriv.flat());
}

void ModeSystem::rhs(double tau, std::span<const double> y, std::span<double> dydt) const {
  const TrajectorySample s = trajectory_->sample(tau);
  if (!(s.L > 0.0)) throw InvalidArgument("dynamics", "cavity width must be positive");
  // The matrix is rebuilt per call; thread_local keeps the allocation across calls.
  thread_local Eigen::MatrixXd c;
  masks_.combine(s.fdot / s.L, s.Ldot / s.L, c);
  kernels::RhsScalars scalars;
  scalars.inv_L = 1.0 / s.L;
  scalars.half_rate = 0.5 * s.Ldot / s.L;
  if (kernel_ == KernelKind::reference) {
    kernels::coupled_rhs_reference(c, omega_sq_, scalars, y, dydt);
  } else {
    kernels::coupled_rhs_parallel(c, omega_sq_, scalars, y, dydt);
  }
}

BasisMatrix in_basis(const ModeSpectrum& spectrum, double tau0) {
  BasisMatrix b(spectrum.N, tau0);
  for (int I = 0; I < spectrum.N; ++I) {
    const double K = spectrum.omega(I + 1);
    const double r = std::sqrt(K);
    b.phi(I, I) = 1.0 / r;
    b.pi(I, I) = -kI * r;
  }
  return b;
}

OutBasis::OutBasis(ModeSpectrum spectrum, double tau_ref, double L_final)
    : spectrum_(spectrum), tau_ref_(tau_ref), L_final_(L_final) {
  check_N(spectrum.N);
  if (!(L_final > 0.0)) throw InvalidArgument("dynamics", "L_final must be positive");
}

double OutBasis::frequency(int J) const { return spectrum_.omega(J + 1) / L_final_; }

cplx OutBasis::phase(int J, double tau) const {
  if (tau == tau_ref_) return 1.0;
  return std::exp(-kI * (frequency(J) * (tau - tau_ref_)));
}

ModeStateVector OutBasis::column(int J, double tau) const {
  ModeStateVector w(spectrum_.N);
  const double r = std::sqrt(spectrum_.omega(J + 1));
  const cplx e = phase(J, tau);
  w.phi[J] = e / r;
  w.pi[J] = -kI * r * e;
  return w;
}

BasisMatrix OutBasis::at(double tau) const {
  BasisMatrix b(spectrum_.N, tau);
  for (int J = 0; J < spectrum_.N; ++J) {
    const double r = std::sqrt(spectrum_.omega(J + 1));
    const cplx e = phase(J, tau);
    b.phi(J, J) = e / r;
    b.pi(J, J) = -kI * r * e;
  }
  return b;
}

}  // namespace dce
