#include "dce/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "dce/errors.hpp"

namespace dce {

namespace {

constexpr double kPi = std::numbers::pi;
// Left mirror position accepted as "at the origin" in the static regions.
constexpr double kOriginSlack = 1e-14;

struct Rule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

template <unsigned Order>
Rule gauss_rule() {
  using Gauss = boost::math::quadrature::gauss<double, Order>;
  const auto& a = Gauss::abscissa();
  const auto& w = Gauss::weights();
  Rule r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
      continue;
    }
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

Rule gauss_rule(int order) {
  switch (order) {
    case 8: return gauss_rule<8>();
    case 16: return gauss_rule<16>();
    case 32: return gauss_rule<32>();
    default: throw InvalidArgument("conformal", "quadrature order must be 8, 16 or 32");
  }
}

// Composite rule on [a, a + 1] with P equal panels.
void composite(const Rule& r, int P, double a, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  const double h = 1.0 / P;
  for (int p = 0; p < P; ++p) {
    const double left = a + p * h;
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      nodes.push_back(left + 0.5 * h * (1.0 + r.x[j]));
      weights.push_back(0.5 * h * r.w[j]);
    }
  }
}

// Runs body(i) for i in [0, n) under OpenMP and rethrows the first failure.
template <class Body>
void parallel_for(int n, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(dce_conformal_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

MooreFunctions::MooreFunctions(const Trajectory& trajectory, MooreConfig config)
    : traj_(trajectory), cfg_(config) {
  if (cfg_.max_reflections < 1 || cfg_.max_iterations < 1 || !(cfg_.root_tolerance > 0.0)) {
    throw InvalidArgument("conformal", "invalid Moore configuration");
  }
  t_start_ = traj_.motion_start();
  t_stop_ = traj_.motion_stop();
  if (!(t_stop_ >= t_start_)) throw InvalidArgument("conformal", "motion stops before it starts");
  const Jet3 f0 = traj_.left(t_start_);
  const Jet3 f1 = traj_.left(t_stop_);
  if (std::abs(f0.v) > kOriginSlack || std::abs(f1.v) > kOriginSlack) {
    throw InvalidArgument("conformal", "left mirror must rest at x = 0 before and after the motion");
  }
  lambda_i_ = traj_.right(t_start_).v - f0.v;
  lambda_f_ = traj_.right(t_stop_).v - f1.v;
  if (!(lambda_i_ > 0.0) || !(lambda_f_ > 0.0)) {
    throw InvalidArgument("conformal", "cavity width must be positive in the static regions");
  }
}

double MooreFunctions::solve(double target, bool right_mirror) const {
  const double s = right_mirror ? 1.0 : -1.0;
  auto boundary = [&](double t) { return right_mirror ? traj_.right(t) : traj_.left(t); };
  auto h = [&](double t) { return t + s * boundary(t).v; };

  double t0 = target - s * boundary(target).v;
  t0 = target - s * boundary(t0).v;
  const double r0 = h(t0) - target;
  if (r0 == 0.0) return t0;
  // h is strictly increasing; walk away from t0 until the root is bracketed.
  double lo = t0;
  double hi = t0;
  double step = std::abs(r0) + 1e-3;
  for (int expand = 0; r0 > 0.0 ? h(lo) > target : h(hi) < target; ++expand) {
    if (expand > 200) throw NoConvergence("could not bracket a reflection time");
    (r0 > 0.0 ? lo : hi) = t0 + (r0 > 0.0 ? -step : step);
    step *= 2.0;
  }

  std::uintmax_t iters = static_cast<std::uintmax_t>(cfg_.max_iterations);
  const double t = boost::math::tools::newton_raphson_iterate(
      [&](double x) {
        const Jet3 b = boundary(x);
        return std::make_pair(x + s * b.v - target, 1.0 + s * b.d1);
      },
      t0, lo, hi, std::numeric_limits<double>::digits, iters);
  const double res = std::abs(h(t) - target);
  if (!std::isfinite(t) || res > cfg_.root_tolerance * (1.0 + std::abs(target))) {
    throw NoConvergence("reflection time residual " + std::to_string(res) + " at z = " +
                        std::to_string(target));
  }
  return t;
}

MooreValue MooreFunctions::run(double z, MooreBranch branch, std::vector<double>* times) const {
  if (!std::isfinite(z)) throw InvalidArgument("conformal", "non-finite null coordinate");
  const double g_static = t_start_ + lambda_i_;
  const double f_static = t_start_;

  MooreValue out;
  Jet3 Z = Jet3::variable(z);
  if (branch == MooreBranch::F) {
    if (z <= f_static) {
      out.value = Z / lambda_i_;
      out.terminal = z;
      return out;
    }
    // F(z) = G(t + f(t)) with t - f(t) = z.
    const double t = solve(z, false);
    if (times) times->push_back(t);
    const Jet3 fj = traj_.left(t);
    const Jet3 tz = compose(inverse(Jet3::variable(t) - fj, t), Z);
    Z = compose(Jet3::variable(t) + fj, tz);
  }

  int n = 0;
  bool reflected = branch == MooreBranch::F;
  for (;;) {
    if (Z.v <= g_static) {
      out.value = 2.0 * n + Z / lambda_i_;
      out.terminal = Z.v;
      out.end = reflected ? TraceEnd::left : TraceEnd::direct;
      break;
    }
    if (n >= cfg_.max_reflections) {
      throw MaxReflectionsExceeded("more than " + std::to_string(cfg_.max_reflections) +
                                   " reflections tracing z = " + std::to_string(z));
    }
    const double t1 = solve(Z.v, true);
    if (times) times->push_back(t1);
    const Jet3 gj = traj_.right(t1);
    const Jet3 t1z = compose(inverse(Jet3::variable(t1) + gj, t1), Z);
    const Jet3 V = compose(Jet3::variable(t1) - gj, t1z);
    ++n;
    reflected = true;
    if (V.v <= f_static) {
      out.value = 2.0 * n + V / lambda_i_;
      out.terminal = V.v;
      out.end = TraceEnd::right;
      break;
    }
    const double t2 = solve(V.v, false);
    if (times) times->push_back(t2);
    const Jet3 fj = traj_.left(t2);
    const Jet3 t2z = compose(inverse(Jet3::variable(t2) - fj, t2), V);
    Z = compose(Jet3::variable(t2) + fj, t2z);
  }
  out.n = n;
  return out;
}

MooreValue MooreFunctions::eval(double z, MooreBranch branch) const {
  return run(z, branch, nullptr);
}

RayTrace MooreFunctions::trace(double z, MooreBranch branch) const {
  RayTrace r;
  const MooreValue v = run(z, branch, &r.times);
  r.n = v.n;
  r.terminal = v.terminal;
  r.end = v.end;
  return r;
}

RayTrace trace_ray(double z, const MooreFunctions& moore, MooreBranch branch) {
  return moore.trace(z, branch);
}

MooreValue moore_eval(double z, const MooreFunctions& moore, MooreBranch branch) {
  return moore.eval(z, branch);
}

std::vector<MooreResidual> moore_residuals(const MooreFunctions& moore, double t0, double t1,
                                           int points) {
  if (points < 2 || !(t1 > t0)) throw InvalidArgument("conformal", "need t1 > t0 and points >= 2");
  std::vector<MooreResidual> out(points);
  const Trajectory& traj = moore.trajectory();
  parallel_for(points, [&](int k) {
    const double t = t0 + (t1 - t0) * k / (points - 1);
    const double f = traj.left(t).v;
    const double g = traj.right(t).v;
    out[k].t = t;
    out[k].left = moore.G(t + f).value.v - moore.F(t - f).value.v;
    out[k].right = moore.G(t + g).value.v - moore.F(t - g).value.v - 2.0;
  });
  return out;
}

namespace {

struct NodeSet {
  std::vector<double> s;  // u or v
  std::vector<double> w;
  std::vector<double> h;  // G(Lambda u) or F(Lambda v)
  double max_derivative = 0.0;
};

// Nodes of both unit intervals with the Moore function sampled at each.
NodeSet sample_nodes(const MooreFunctions& moore, const Rule& rule, int P) {
  const double lf = moore.lambda_f();
  const double a = moore.motion_stop() / lf;
  std::vector<double> u, wu, v, wv;
  composite(rule, P, a, u, wu);
  composite(rule, P, a - 1.0, v, wv);
  const int M = static_cast<int>(u.size());

  NodeSet ns;
  ns.s.resize(2 * M);
  ns.w.resize(2 * M);
  ns.h.resize(2 * M);
  std::vector<double> deriv(2 * M);
  parallel_for(2 * M, [&](int k) {
    const bool on_G = k < M;
    const double s = on_G ? u[k] : v[k - M];
    const MooreValue mv = moore.eval(lf * s, on_G ? MooreBranch::G : MooreBranch::F);
    ns.s[k] = s;
    ns.w[k] = on_G ? wu[k] : wv[k - M];
    ns.h[k] = mv.value.v;
    deriv[k] = mv.value.d1;
  });
  for (double d : deriv) {
    if (!(d > 0.0)) throw NoConvergence("Moore function is not monotone at a quadrature node");
  }
  // Derivative with respect to the scaled variable: d/ds h(Lambda s).
  ns.max_derivative = lf * *std::max_element(deriv.begin(), deriv.end());
  return ns;
}

// e^{-i pi k x} with the product reduced mod 2 before the trig call.
inline cplx unit_phase(int k, double x) {
  const double arg = std::fmod(k * x, 2.0);
  return {std::cos(kPi * arg), -std::sin(kPi * arg)};
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> integrate(const NodeSet& ns, int N) {
  const int K = static_cast<int>(ns.s.size());
  Eigen::MatrixXcd A(N, K);   // e^{-i pi I h_k}
  Eigen::MatrixXcd Ew(N, K);  // w_k e^{-i pi J s_k}
  parallel_for(K, [&](int k) {
    for (int I = 0; I < N; ++I) {
      A(I, k) = unit_phase(I + 1, ns.h[k]);
      Ew(I, k) = ns.w[k] * unit_phase(I + 1, ns.s[k]);
    }
  });
  Eigen::MatrixXcd alpha = A * Ew.conjugate().transpose();
  Eigen::MatrixXcd beta = A * Ew.transpose();
  for (int I = 0; I < N; ++I) {
    for (int J = 0; J < N; ++J) {
      const double pref = 0.5 * std::sqrt(static_cast<double>(J + 1) / (I + 1));
      alpha(I, J) *= pref;
      beta(I, J) *= pref;
    }
  }
  return {std::move(alpha), std::move(beta)};
}

}  // namespace

ConformalResult bogoliubov_conformal(const MooreFunctions& moore, int N,
                                     const ConformalQuadrature& quad) {
  if (N < 1) throw InvalidArgument("conformal", "N must be positive");
  if (quad.min_panels < 1 || !(quad.panel_factor > 0.0) || !(quad.tolerance > 0.0)) {
    throw InvalidArgument("conformal", "invalid quadrature configuration");
  }
  const Rule rule = gauss_rule(quad.order);

  const NodeSet probe = sample_nodes(moore, rule, quad.min_panels);
  const int P = std::max(quad.min_panels,
                         static_cast<int>(std::ceil(quad.panel_factor * N * (1.0 + probe.max_derivative))));
  const NodeSet coarse = P == quad.min_panels ? probe : sample_nodes(moore, rule, P);
  const NodeSet fine = sample_nodes(moore, rule, 2 * P);

  auto [a1, b1] = integrate(coarse, N);
  auto [a2, b2] = integrate(fine, N);

  ConformalResult r;
  r.alpha_error = (a2 - a1).cwiseAbs();
  r.beta_error = (b2 - b1).cwiseAbs();
  r.pair.alpha = std::move(a2);
  r.pair.beta = std::move(b2);
  r.panels = 2 * P;
  r.max_derivative = std::max(coarse.max_derivative, fine.max_derivative);
  r.unconverged = static_cast<int>((r.alpha_error.array() > quad.tolerance).count() +
                                   (r.beta_error.array() > quad.tolerance).count());
  r.pair.meta["method"] = "conformal";
  r.pair.meta["tau"] = std::to_string(moore.motion_stop());
  r.pair.meta["panels"] = std::to_string(r.panels);
  r.pair.meta["unconverged"] = std::to_string(r.unconverged);
  return r;
}

double rset_flux(const Jet3& h) {
  if (!(h.d1 > 0.0) || !std::isfinite(h.d1) || !std::isfinite(h.d2) || !std::isfinite(h.d3)) {
    throw DerivativeUnavailable("Moore function derivative must be positive and finite");
  }
  const double r = h.d2 / h.d1;
  return (h.d3 / h.d1 - 1.5 * r * r + 0.5 * kPi * kPi * h.d1 * h.d1) / (24.0 * kPi);
}

RsetSample rset(double t, double x, const MooreFunctions& moore) {
  const double fG = rset_flux(moore.G(t + x).value);
  const double fF = rset_flux(moore.F(t - x).value);
  return {t, x, -(fG + fF), fG - fF};
}

}  // namespace dce
