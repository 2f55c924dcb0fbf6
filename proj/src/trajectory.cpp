#include "dce/trajectory.hpp"

#include <cmath>
#include <map>

#include "dce/errors.hpp"

namespace dce {

namespace {

constexpr double kPi = std::numbers::pi;

// exp() of anything below this underflows to zero in double precision.
constexpr double kExpUnderflow = -745.0;

void check_window_args(double sigma, double gamma) {
  if (!(sigma > 0.0) || !(gamma > 0.0)) {
    throw InvalidArgument("trajectory", "window requires sigma > 0 and gamma > 0");
  }
}

}  // namespace

Jet3 window_jet(WindowKind kind, double t, double sigma, double gamma) {
  check_window_args(sigma, gamma);
  if (!std::isfinite(t)) throw InvalidArgument("trajectory", "non-finite time");
  if (!(t > 0.0 && t < 2.0 * gamma)) return Jet3::constant(0.0);

  const Jet3 x = Jet3::variable(t) / gamma - 1.0;
  if (kind == WindowKind::gaussian) {
    const Jet3 exponent = -(x * x) / (2.0 * sigma * sigma);
    if (exponent.v < kExpUnderflow) return Jet3::constant(0.0);
    return exp(exponent);
  }
  const Jet3 y = 1.0 - x * x;
  const Jet3 exponent = (1.0 - reciprocal(y)) / sigma;
  if (exponent.v < kExpUnderflow) return Jet3::constant(0.0);
  return exp(exponent);
}

double bump(double t, double sigma, double gamma) {
  return window_jet(WindowKind::bump, t, sigma, gamma).v;
}

TrajectorySample Trajectory::sample(double t) const {
  const Jet3 f = left(t);
  const Jet3 g = right(t);
  TrajectorySample s;
  s.t = t;
  s.f = f.v;
  s.g = g.v;
  s.L = g.v - f.v;
  s.fdot = f.d1;
  s.gdot = g.d1;
  s.Ldot = g.d1 - f.d1;
  return s;
}

OscillatingTrajectory::OscillatingTrajectory(const TrajectoryParams& params) : params_(params) {
  check_window_args(params.sigma, params.gamma);
  if (!(params.L0 > 0.0)) throw InvalidArgument("trajectory", "L0 must be positive");
}

Jet3 OscillatingTrajectory::left(double t) const {
  const auto& p = params_;
  if (p.eps2 == 0.0) return Jet3::constant(0.0);
  const Jet3 B = window_jet(p.window, t, p.sigma, p.gamma);
  const Jet3 phase = Jet3::variable(t) * (p.q * kPi);
  return (p.eps2 * p.L0) * (B * sin(phase));
}

Jet3 OscillatingTrajectory::right(double t) const {
  const auto& p = params_;
  if (p.eps1 == 0.0) return Jet3::constant(p.L0);
  const Jet3 B = window_jet(p.window, t, p.sigma, p.gamma);
  const Jet3 phase = Jet3::variable(t) * (p.q * kPi) + p.phi;
  return p.L0 + (p.eps1 * p.L0) * (B * (sin(phase) - std::sin(p.phi)));
}

CustomTrajectory::CustomTrajectory(BoundaryFn left, BoundaryFn right, double motion_start,
                                   double motion_stop)
    : left_(std::move(left)), right_(std::move(right)), start_(motion_start), stop_(motion_stop) {
  if (!left_ || !right_) throw InvalidArgument("trajectory", "boundary callables must be set");
  if (!(motion_stop >= motion_start)) {
    throw InvalidArgument("trajectory", "motion_stop must not precede motion_start");
  }
}

TrajectorySample sample(const TrajectoryParams& params, double t) {
  return OscillatingTrajectory(params).sample(t);
}

std::vector<Violation> validate(const Trajectory& trajectory, int points) {
  if (points < 2) throw InvalidArgument("trajectory", "validation grid needs at least 2 points");
  std::vector<Violation> out;
  bool speed_f = false, speed_g = false, width = false;
  const double t0 = trajectory.motion_start();
  const double t1 = trajectory.motion_stop();
  for (int k = 0; k < points; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / (points - 1);
    const TrajectorySample s = trajectory.sample(t);
    if (!speed_f && !(std::abs(s.fdot) < 1.0)) {
      out.push_back({t, "fdot", s.fdot});
      speed_f = true;
    }
    if (!speed_g && !(std::abs(s.gdot) < 1.0)) {
      out.push_back({t, "gdot", s.gdot});
      speed_g = true;
    }
    if (!width && !(s.L > 0.0)) {
      out.push_back({t, "L", s.L});
      width = true;
    }
  }
  return out;
}

std::vector<Violation> validate(const TrajectoryParams& params, int points) {
  std::vector<Violation> out;
  if (!(params.sigma > 0.0)) out.push_back({0.0, "sigma", params.sigma});
  if (!(params.gamma > 0.0)) out.push_back({0.0, "gamma", params.gamma});
  if (!(params.L0 > 0.0)) out.push_back({0.0, "L0", params.L0});
  if (!out.empty()) return out;
  return validate(OscillatingTrajectory(params), points);
}

namespace {

const std::map<std::string, TrajectoryParams>& presets() {
  static const std::map<std::string, TrajectoryParams> table = [] {
    std::map<std::string, TrajectoryParams> m;
    TrajectoryParams p;
    p.eps1 = 0.0;
    p.eps2 = 0.0;
    m["static"] = p;

    p.eps1 = 1.0 / 40.0;
    p.eps2 = 0.0;
    p.q = 10.0;
    p.phi = kPi;
    p.sigma = 0.1;
    p.gamma = 1.0;
    m["one-mirror"] = p;

    p.eps2 = 1.0 / 40.0;
    m["opposite-phase"] = p;

    p.phi = 0.0;
    m["in-phase"] = p;

    p.eps2 = 0.0;
    p.phi = kPi;
    p.window = WindowKind::gaussian;
    p.sigma = 1.0 / 9.0;
    p.gamma = 2.5;
    m["gaussian-window"] = p;
    return m;
  }();
  return table;
}

}  // namespace

std::optional<TrajectoryParams> preset_trajectory(const std::string& name) {
  const auto& table = presets();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

}  // namespace dce
