#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dce/jet.hpp"

namespace dce {

/// Switching window applied to the mirror oscillation.
enum class WindowKind {
  bump,      ///< compactly supported C-infinity bump on (0, 2*gamma)
  gaussian,  ///< Gaussian centred at gamma, relative width sigma, cut to (0, 2*gamma)
};

/// Parametric mirror motion
///   g(t) = 1 + eps1 B(t) (sin(q pi t + phi) - sin phi)
///   f(t) = eps2 B(t) sin(q pi t)
/// in units of the initial cavity length L0 = 1.
struct TrajectoryParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double q = 10.0;
  double phi = std::numbers::pi;
  double sigma = 0.1;
  double gamma = 1.0;
  double L0 = 1.0;
  WindowKind window = WindowKind::bump;
};

struct TrajectorySample {
  double t = 0.0;
  double f = 0.0;
  double g = 1.0;
  double L = 1.0;
  double fdot = 0.0;
  double gdot = 0.0;
  double Ldot = 0.0;
};

/// One grid point where a trajectory invariant fails.
struct Violation {
  double t = 0.0;
  std::string quantity;
  double value = 0.0;
};

/// Evaluation interface shared by the parametric family and user motions.
/// Implementations must be pure and safe to call concurrently.
class Trajectory {
 public:
  virtual ~Trajectory() = default;

  /// Left boundary f and its first three time derivatives at t.
  virtual Jet3 left(double t) const = 0;
  /// Right boundary g and its first three time derivatives at t.
  virtual Jet3 right(double t) const = 0;

  /// Both boundaries are static for t <= motion_start() and t >= motion_stop().
  virtual double motion_start() const = 0;
  virtual double motion_stop() const = 0;

  TrajectorySample sample(double t) const;
};

/// Window function B(t) as a jet in t.
Jet3 window_jet(WindowKind kind, double t, double sigma, double gamma);

/// Compactly supported bump exp[(1/sigma)(1 - 1/(1 - (t/gamma - 1)^2))] on
/// (0, 2 gamma), exactly 0 elsewhere. Throws InvalidArgument for non-finite t
/// or non-positive sigma/gamma.
double bump(double t, double sigma, double gamma);

class OscillatingTrajectory final : public Trajectory {
 public:
  explicit OscillatingTrajectory(const TrajectoryParams& params);

  Jet3 left(double t) const override;
  Jet3 right(double t) const override;
  double motion_start() const override { return 0.0; }
  double motion_stop() const override { return 2.0 * params_.gamma; }

  const TrajectoryParams& params() const { return params_; }

 private:
  TrajectoryParams params_;
};

/// User-supplied motion built from two jet-valued callables. The callables
/// receive Jet3::variable(t) and must return the boundary as a jet.
class CustomTrajectory final : public Trajectory {
 public:
  using BoundaryFn = std::function<Jet3(const Jet3&)>;

  CustomTrajectory(BoundaryFn left, BoundaryFn right, double motion_start, double motion_stop);

  Jet3 left(double t) const override { return left_(Jet3::variable(t)); }
  Jet3 right(double t) const override { return right_(Jet3::variable(t)); }
  double motion_start() const override { return start_; }
  double motion_stop() const override { return stop_; }

 private:
  BoundaryFn left_;
  BoundaryFn right_;
  double start_;
  double stop_;
};

TrajectorySample sample(const TrajectoryParams& params, double t);

/// Grid-based check of the trajectory invariants (subluminal boundaries and
/// positive width). `points` uniform samples cover the motion window.
std::vector<Violation> validate(const Trajectory& trajectory, int points = 100000);
std::vector<Violation> validate(const TrajectoryParams& params, int points = 100000);

/// Named parameter sets for the configurations reproduced by the presets.
std::optional<TrajectoryParams> preset_trajectory(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace dce
