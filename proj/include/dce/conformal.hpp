#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dce/bogoliubov.hpp"
#include "dce/jet.hpp"
#include "dce/trajectory.hpp"

namespace dce {

/// Which Moore function a null coordinate belongs to.
///   G: z = t + x, traced back along left-moving rays (first hit: right mirror)
///   F: z = t - x, traced back along right-moving rays (first hit: left mirror)
enum class MooreBranch { G, F };

struct MooreConfig {
  int max_reflections = 100000;
  int max_iterations = 200;
  /// Accepted |h(t) - z| after root finding, relative to 1 + |z|.
  double root_tolerance = 1e-13;
};

/// How the backward ray trace ended.
///   direct: z already in the static region of the requested function
///   right:  the last reflection was off the right mirror; terminal value in
///           the static region of F
///   left:   the last reflection was off the left mirror; terminal value in
///           the static region of G
enum class TraceEnd { direct, right, left };

struct RayTrace {
  int n = 0;                  ///< reflections off the right mirror
  double terminal = 0.0;      ///< t_f: null coordinate where the ray left the motion
  TraceEnd end = TraceEnd::direct;
  std::vector<double> times;  ///< reflection times in tracing order
};

struct MooreValue {
  Jet3 value;  ///< function value and derivatives with respect to z
  int n = 0;
  double terminal = 0.0;
  TraceEnd end = TraceEnd::direct;
};

/// Ray-traced solution of the Moore equations
///   G(t + f(t)) = F(t - f(t)),   G(t + g(t)) = F(t - g(t)) + 2
/// normalised so G(z) = z/Lambda_i and F(z) = z/Lambda_i before the motion
/// starts. Requires the left mirror at x = 0 while static; holds a reference
/// to the trajectory, which must outlive this object. Evaluation is const and
/// thread safe.
class MooreFunctions {
 public:
  explicit MooreFunctions(const Trajectory& trajectory, MooreConfig config = {});

  MooreValue G(double z) const { return eval(z, MooreBranch::G); }
  MooreValue F(double z) const { return eval(z, MooreBranch::F); }
  MooreValue eval(double z, MooreBranch branch) const;
  RayTrace trace(double z, MooreBranch branch) const;

  double lambda_i() const { return lambda_i_; }
  double lambda_f() const { return lambda_f_; }
  double motion_start() const { return t_start_; }
  double motion_stop() const { return t_stop_; }
  const Trajectory& trajectory() const { return traj_; }

 private:
  MooreValue run(double z, MooreBranch branch, std::vector<double>* times) const;
  /// Root of t + g(t) = target (right mirror) or t - f(t) = target (left).
  double solve(double target, bool right_mirror) const;

  const Trajectory& traj_;
  MooreConfig cfg_;
  double t_start_;
  double t_stop_;
  double lambda_i_;
  double lambda_f_;
};

RayTrace trace_ray(double z, const MooreFunctions& moore, MooreBranch branch);
MooreValue moore_eval(double z, const MooreFunctions& moore, MooreBranch branch);

/// Residuals of both Moore equations at time t:
///   left  = G(t + f) - F(t - f),  right = G(t + g) - F(t - g) - 2.
struct MooreResidual {
  double t = 0.0;
  double left = 0.0;
  double right = 0.0;
};

std::vector<MooreResidual> moore_residuals(const MooreFunctions& moore, double t0, double t1,
                                           int points);

struct ConformalQuadrature {
  int order = 16;  ///< Gauss-Legendre points per panel; one of 8, 16, 32
  int min_panels = 64;
  double panel_factor = 1.0;  ///< panels >= factor * N * (1 + max(G', F'))
  double tolerance = 1e-10;   ///< per-entry panel-doubling tolerance
};

/// alpha and beta from the quadrature, plus the panel-doubling difference of
/// every entry. Entries whose difference exceeds the tolerance are counted in
/// `unconverged`; the pair is still returned.
struct ConformalResult {
  BogoliubovPair pair;
  Eigen::MatrixXd alpha_error;
  Eigen::MatrixXd beta_error;
  int panels = 0;
  int unconverged = 0;
  double max_derivative = 0.0;
};

/// Massless 1+1 Bogoliubov coefficients at t = motion stop, with the same
/// index convention as the canonical pipeline: alpha(I, J) with I the in mode
/// and J the out mode. Only moduli are comparable across methods.
ConformalResult bogoliubov_conformal(const MooreFunctions& moore, int N,
                                     const ConformalQuadrature& quad = {});

struct RsetSample {
  double t = 0.0;
  double x = 0.0;
  double T00 = 0.0;
  double T01 = 0.0;
};

/// f = (1/24 pi) [h'''/h' - 3/2 (h''/h')^2 + (pi^2/2) h'^2] for a Moore function jet.
/// Throws DerivativeUnavailable unless h' > 0 and all derivatives are finite.
double rset_flux(const Jet3& h);

RsetSample rset(double t, double x, const MooreFunctions& moore);

}  // namespace dce
