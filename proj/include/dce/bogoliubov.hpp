#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dce/dynamics.hpp"

namespace dce {

/// alpha(I, J), beta(I, J): I indexes the in basis, J the out basis (0-based).
struct BogoliubovPair {
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd beta;
  std::map<std::string, std::string> meta;

  int size() const { return static_cast<int>(alpha.rows()); }
  static BogoliubovPair identity(int N);
};

/// (i/2) sum_n (conj(phi1_n) pi2_n - conj(pi1_n) phi2_n), antilinear in U1.
cplx kg_product(const ModeStateVector& U1, const ModeStateVector& U2);

/// alpha_IJ = <w_J, u_I>, beta_IJ = -<conj(w_J), u_I> with the analytic out
/// basis evaluated at evolved.tau. Uses that w_J is supported on mode J only.
/// Throws TimeBeforeMotionStop if evolved.tau < motion_stop.
BogoliubovPair extract_bogoliubov(const BasisMatrix& evolved, const OutBasis& out,
                                  double motion_stop);

/// Same coefficients from full KG products against an arbitrary out basis
/// given as a BasisMatrix at the same time. O(N^3); used as a cross-check.
BogoliubovPair extract_bogoliubov_general(const BasisMatrix& evolved, const BasisMatrix& out);

/// RMS residuals of the four identity families
///   bogo1: alpha alpha^H - beta beta^H - 1
///   bogo2: alpha beta^T - beta alpha^T
///   bogo3: alpha^H alpha - beta^T conj(beta) - 1
///   bogo4: alpha^H beta - beta^T conj(alpha)
/// over all (I, J) and over the interior block I, J < interior.
struct IdentityResiduals {
  std::array<double, 4> full{};
  std::array<double, 4> interior{};
  int interior_size = 0;
};

/// `interior` defaults to N/2 when negative.
IdentityResiduals check_identities(const BogoliubovPair& pair, int interior = -1);

/// G_IJ = <u_I, u_J>.
Eigen::MatrixXcd gram_matrix(const BasisMatrix& basis);
/// <u_I, conj(u_J)>; zero for an exact basis.
Eigen::MatrixXcd gram_conj_matrix(const BasisMatrix& basis);
/// Im(U U^H) in interleaved component order (phi_1, pi_1, phi_2, ...); equals
/// the block symplectic matrix Omega for an exact basis.
Eigen::MatrixXd closure_matrix(const BasisMatrix& basis);

/// Indicators at one instant:
///   delta1     RMS over N^2 entries of |<u_I,u_J> - delta_IJ|
///   delta2     RMS over (2N)^2 entries of |closure - Omega|
///   delta_conj RMS over N^2 entries of |<u_I, conj(u_J)>|
struct IndicatorSample {
  double tau = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta_conj = 0.0;
};

IndicatorSample error_indicators(const BasisMatrix& basis);

struct ErrorIndicators {
  std::vector<IndicatorSample> samples;

  void record(const BasisMatrix& basis) { samples.push_back(error_indicators(basis)); }
  double max_delta1() const;
  double max_delta2() const;
  double max_delta_conj() const;
};

}  // namespace dce
