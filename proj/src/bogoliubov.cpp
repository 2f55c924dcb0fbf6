#include "dce/bogoliubov.hpp"

#include <algorithm>
#include <cmath>

#include "dce/errors.hpp"

namespace dce {

namespace {

const cplx kI{0.0, 1.0};

double rms(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt(m.cwiseAbs2().sum() / static_cast<double>(m.size()));
}

Eigen::MatrixXcd eye(int N) { return Eigen::MatrixXcd::Identity(N, N); }

}  // namespace

BogoliubovPair BogoliubovPair::identity(int N) {
  BogoliubovPair p;
  p.alpha = eye(N);
  p.beta = Eigen::MatrixXcd::Zero(N, N);
  return p;
}

cplx kg_product(const ModeStateVector& U1, const ModeStateVector& U2) {
  if (U1.size() != U2.size()) throw InvalidArgument("bogoliubov", "KG product of unequal N");
  cplx s = 0.0;
  for (int n = 0; n < U1.size(); ++n) {
    s += std::conj(U1.phi[n]) * U2.pi[n] - std::conj(U1.pi[n]) * U2.phi[n];
  }
  return 0.5 * kI * s;
}

BogoliubovPair extract_bogoliubov(const BasisMatrix& evolved, const OutBasis& out,
                                  double motion_stop) {
  if (evolved.tau < motion_stop) {
    throw TimeBeforeMotionStop("extraction at tau = " + std::to_string(evolved.tau) +
                               " precedes motion stop " + std::to_string(motion_stop));
  }
  const int N = evolved.size();
  if (out.size() != N) throw InvalidArgument("bogoliubov", "out basis size does not match");
  BogoliubovPair p;
  p.alpha.resize(N, N);
  p.beta.resize(N, N);
  for (int J = 0; J < N; ++J) {
    const double K = out.spectrum().omega(J + 1);
    const double r = std::sqrt(K);
    const cplx e = out.phase(J, evolved.tau);
    const cplx ebar = std::conj(e);
    for (int I = 0; I < N; ++I) {
      const cplx phi = evolved.phi(J, I);
      const cplx pi = evolved.pi(J, I);
      p.alpha(I, J) = ebar * (0.5 * kI * pi / r + 0.5 * r * phi);
      p.beta(I, J) = e * (-0.5 * kI * pi / r + 0.5 * r * phi);
    }
  }
  p.meta["tau"] = std::to_string(evolved.tau);
  return p;
}

BogoliubovPair extract_bogoliubov_general(const BasisMatrix& evolved, const BasisMatrix& out) {
  const int N = evolved.size();
  if (out.size() != N) throw InvalidArgument("bogoliubov", "out basis size does not match");
  BogoliubovPair p;
  p.alpha.resize(N, N);
  p.beta.resize(N, N);
  for (int J = 0; J < N; ++J) {
    const ModeStateVector w = out.column(J);
    const ModeStateVector wbar = w.conj();
    for (int I = 0; I < N; ++I) {
      const ModeStateVector u = evolved.column(I);
      p.alpha(I, J) = kg_product(w, u);
      p.beta(I, J) = -kg_product(wbar, u);
    }
  }
  return p;
}

IdentityResiduals check_identities(const BogoliubovPair& pair, int interior) {
  const int N = pair.size();
  if (pair.beta.rows() != N || pair.beta.cols() != N || pair.alpha.cols() != N) {
    throw InvalidArgument("bogoliubov", "alpha and beta must be square of equal size");
  }
  if (interior < 0) interior = N / 2;
  interior = std::min(interior, N);
  const Eigen::MatrixXcd& a = pair.alpha;
  const Eigen::MatrixXcd& b = pair.beta;
  const std::array<Eigen::MatrixXcd, 4> r = {
      a * a.adjoint() - b * b.adjoint() - eye(N),
      a * b.transpose() - b * a.transpose(),
      a.adjoint() * a - b.transpose() * b.conjugate() - eye(N),
      a.adjoint() * b - b.transpose() * a.conjugate(),
  };
  IdentityResiduals out;
  out.interior_size = interior;
  for (int k = 0; k < 4; ++k) {
    out.full[k] = rms(r[k]);
    out.interior[k] = rms(r[k].topLeftCorner(interior, interior));
  }
  return out;
}

Eigen::MatrixXcd gram_matrix(const BasisMatrix& basis) {
  const Eigen::MatrixXcd Phi = basis.phi_block();
  const Eigen::MatrixXcd Pi = basis.pi_block();
  return 0.5 * kI * (Phi.adjoint() * Pi - Pi.adjoint() * Phi);
}

Eigen::MatrixXcd gram_conj_matrix(const BasisMatrix& basis) {
  const Eigen::MatrixXcd Phi = basis.phi_block();
  const Eigen::MatrixXcd Pi = basis.pi_block();
  return 0.5 * kI * (Phi.adjoint() * Pi.conjugate() - Pi.adjoint() * Phi.conjugate());
}

Eigen::MatrixXd closure_matrix(const BasisMatrix& basis) {
  const int N = basis.size();
  Eigen::MatrixXcd U(2 * N, N);
  for (int n = 0; n < N; ++n) {
    U.row(2 * n) = basis.phi_block().row(n);
    U.row(2 * n + 1) = basis.pi_block().row(n);
  }
  return (U * U.adjoint()).imag();
}

IndicatorSample error_indicators(const BasisMatrix& basis) {
  const int N = basis.size();
  IndicatorSample s;
  s.tau = basis.tau;
  s.delta1 = rms(gram_matrix(basis) - eye(N));
  s.delta_conj = rms(gram_conj_matrix(basis));
  Eigen::MatrixXd C = closure_matrix(basis);
  for (int n = 0; n < N; ++n) {
    C(2 * n, 2 * n + 1) -= 1.0;
    C(2 * n + 1, 2 * n) += 1.0;
  }
  s.delta2 = std::sqrt(C.squaredNorm() / static_cast<double>(C.size()));
  return s;
}

namespace {

template <class F>
double max_over(const std::vector<IndicatorSample>& v, F get) {
  double m = 0.0;
  for (const auto& s : v) m = std::max(m, get(s));
  return m;
}

}  // namespace

double ErrorIndicators::max_delta1() const {
  return max_over(samples, [](const IndicatorSample& s) { return s.delta1; });
}
double ErrorIndicators::max_delta2() const {
  return max_over(samples, [](const IndicatorSample& s) { return s.delta2; });
}
double ErrorIndicators::max_delta_conj() const {
  return max_over(samples, [](const IndicatorSample& s) { return s.delta_conj; });
}

}  // namespace dce
