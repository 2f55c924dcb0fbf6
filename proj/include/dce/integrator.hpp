#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace dce {

struct IntegratorConfig {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  double h_init = 0.0;  ///< 0 selects a starting step automatically
  double h_min = 1e-13;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
  int method_order = 8;

  /// Throws InvalidArgument unless abs_tol in [1e-14, 1e-6], rel_tol >= 0,
  /// h_min > 0 and method_order == 8.
  void validate() const;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double h_last = 0.0;
  double h_smallest = std::numeric_limits<double>::infinity();
};

/// Explicit Runge-Kutta tableau with an embedded lower-order solution.
struct ButcherTableau {
  static constexpr int kStages = 13;
  std::array<double, kStages> c{};
  std::array<std::array<double, kStages>, kStages> a{};
  std::array<double, kStages> b_high{};  ///< propagated solution
  std::array<double, kStages> b_low{};   ///< error estimate only
  int order_high = 0;
  int order_low = 0;
};

/// Prince-Dormand RK8(7)13M.
const ButcherTableau& rk87_tableau();

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using Observer = std::function<void(double t, std::span<const double> y)>;

/// Adaptive embedded RK8(7) integrator for y' = F(t, y) on a flat real state.
///
/// The local error estimate of a step is max_i |y8_i - y7_i| / sc_i with
/// sc_i = abs_tol + rel_tol max(|y_i|, |y_new_i|); a step is accepted when
/// it is at most 1. Step size follows a PI controller.
class Integrator {
 public:
  Integrator(std::size_t dim, IntegratorConfig cfg = {});

  /// Advances y in place from t0 to t1 (either direction). Steps are clipped
  /// so that every checkpoint strictly between t0 and t1 is hit exactly;
  /// `observe` is called at t0, at each checkpoint and at t1.
  void integrate(const RhsFn& f, std::span<double> y, double t0, double t1,
                 std::span<const double> checkpoints = {}, const Observer& observe = {});

  /// Fixed-step propagation with the high-order weights, no error control.
  void integrate_fixed(const RhsFn& f, std::span<double> y, double t0, double t1, long steps);

  const IntegratorStats& stats() const { return stats_; }
  const IntegratorConfig& config() const { return cfg_; }

 private:
  /// One trial step; writes the high-order result to y_new and returns the
  /// scaled error norm.
  double step(const RhsFn& f, double t, double h, std::span<const double> y, bool have_k1);
  double initial_step(const RhsFn& f, double t, double dir, std::span<const double> y);

  std::size_t dim_;
  IntegratorConfig cfg_;
  IntegratorStats stats_;
  std::vector<std::vector<double>> k_;
  std::vector<double> y_stage_;
  std::vector<double> y_new_;
};

}  // namespace dce
