#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dce/dynamics.hpp"
#include "dce/errors.hpp"
#include "dce/integrator.hpp"

using namespace dce;

namespace {

constexpr double kPi = std::numbers::pi;

RhsFn system_rhs(const ModeSystem& sys) {
  return [&sys](double t, std::span<const double> y, std::span<double> dy) { sys.rhs(t, y, dy); };
}

struct Static final : Trajectory {
  Jet3 left(double) const override { return Jet3::constant(0.0); }
  Jet3 right(double) const override { return Jet3::constant(1.0); }
  double motion_start() const override { return 0.0; }
  double motion_stop() const override { return 0.0; }
};

// Deviation of a one-mode static run from the closed form e^{-i pi tau}.
double oscillator_error(double abs_tol, double tau) {
  Static traj;
  ModeSystem sys(traj, {1, 0.0});
  BasisMatrix b = in_basis({1, 0.0}, 0.0);
  IntegratorConfig cfg;
  cfg.abs_tol = abs_tol;
  Integrator integ(b.flat().size(), cfg);
  integ.integrate(system_rhs(sys), b.flat(), 0.0, tau);
  const cplx e = std::exp(cplx(0.0, -kPi * tau));
  const double r = std::sqrt(kPi);
  return std::max(std::abs(b.phi(0, 0) - e / r), std::abs(b.pi(0, 0) - cplx(0.0, -r) * e));
}

}  // namespace

TEST_CASE("tableau order conditions") {
  const auto& t = rk87_tableau();
  for (int s = 0; s < ButcherTableau::kStages; ++s) {
    double row = 0.0;
    for (int j = 0; j < s; ++j) row += t.a[s][j];
    CHECK(std::abs(row - t.c[s]) < 1e-14);
    for (int j = s; j < ButcherTableau::kStages; ++j) CHECK(t.a[s][j] == 0.0);
  }
  // Quadrature conditions sum b c^k = 1/(k+1).
  for (int k = 0; k < t.order_high; ++k) {
    double sh = 0.0;
    for (int j = 0; j < ButcherTableau::kStages; ++j) sh += t.b_high[j] * std::pow(t.c[j], k);
    CHECK(std::abs(sh - 1.0 / (k + 1)) < 1e-12);
  }
  for (int k = 0; k < t.order_low; ++k) {
    double sl = 0.0;
    for (int j = 0; j < ButcherTableau::kStages; ++j) sl += t.b_low[j] * std::pow(t.c[j], k);
    CHECK(std::abs(sl - 1.0 / (k + 1)) < 1e-12);
  }
  // b A c^k conditions (one family of tree conditions).
  for (int k = 0; k < t.order_high - 1; ++k) {
    double s = 0.0;
    for (int i = 0; i < ButcherTableau::kStages; ++i) {
      double inner = 0.0;
      for (int j = 0; j < i; ++j) inner += t.a[i][j] * std::pow(t.c[j], k);
      s += t.b_high[i] * inner;
    }
    CHECK(std::abs(s - 1.0 / ((k + 1) * (k + 2))) < 1e-12);
  }
}

TEST_CASE("static oscillator returns to its initial value after two periods") {
  CHECK(oscillator_error(1e-12, 2.0) < 1e-10);
}

TEST_CASE("tightening abs_tol does not worsen the oscillator error") {
  double prev = oscillator_error(1e-8, 3.3);
  for (double tol : {5e-9, 2.5e-9, 1.25e-9, 6.25e-10, 1e-10, 5e-11, 1e-11, 1e-12}) {
    const double e = oscillator_error(tol, 3.3);
    CHECK(e <= prev + 1e-14);
    prev = e;
  }
}

TEST_CASE("zero rhs leaves the state bit-identical") {
  std::vector<double> y = {1.0, -2.5, 3.25e-7, 0.0};
  const auto y0 = y;
  Integrator integ(y.size());
  integ.integrate([](double, std::span<const double>, std::span<double> dy) {
    std::fill(dy.begin(), dy.end(), 0.0);
  }, y, 0.0, 5.0);
  CHECK(y == y0);
}

TEST_CASE("fixed-step convergence order is at least 8") {
  Static traj;
  ModeSystem sys(traj, {1, 0.0});
  auto error_for = [&](long steps) {
    BasisMatrix b = in_basis({1, 0.0}, 0.0);
    Integrator integ(b.flat().size());
    integ.integrate_fixed(system_rhs(sys), b.flat(), 0.0, 2.0, steps);
    return std::abs(b.phi(0, 0) - 1.0 / std::sqrt(kPi));
  };
  const double e1 = error_for(8), e2 = error_for(16);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 7.8);
}

TEST_CASE("forward then backward recovers the initial basis") {
  const OscillatingTrajectory traj(*preset_trajectory("one-mirror"));
  const int N = 8;
  ModeSystem sys(traj, {N, 0.0});
  BasisMatrix b = in_basis({N, 0.0}, 0.0);
  const BasisMatrix b0 = b;
  IntegratorConfig cfg;
  cfg.abs_tol = 1e-11;
  Integrator integ(b.flat().size(), cfg);
  integ.integrate(system_rhs(sys), b.flat(), 0.0, 2.0);
  integ.integrate(system_rhs(sys), b.flat(), 2.0, 0.0);
  const double err = (b.data() - b0.data()).cwiseAbs().maxCoeff();
  CHECK(err < 10 * cfg.abs_tol);
  MESSAGE("round trip deviation " << err << " over " << integ.stats().accepted << " steps");
}

TEST_CASE("identical runs are bit-identical and checkpoints are hit exactly") {
  const OscillatingTrajectory traj(*preset_trajectory("opposite-phase"));
  const int N = 6;
  ModeSystem sys(traj, {N, 0.0});
  const std::vector<double> marks = {0.5, 1.0, 1.5, 0.25};
  auto run = [&](std::vector<double>& seen) {
    BasisMatrix b = in_basis({N, 0.0}, 0.0);
    Integrator integ(b.flat().size());
    integ.integrate(system_rhs(sys), b.flat(), 0.0, 2.0, marks,
                    [&](double t, std::span<const double>) { seen.push_back(t); });
    return b;
  };
  std::vector<double> s1, s2;
  const BasisMatrix a = run(s1), b = run(s2);
  CHECK(a.data() == b.data());
  CHECK(s1 == std::vector<double>{0.0, 0.25, 0.5, 1.0, 1.5, 2.0});
  CHECK(s1 == s2);
}

TEST_CASE("step underflow and non-finite states are reported") {
  std::vector<double> y = {1.0};
  IntegratorConfig cfg;
  cfg.h_min = 1e-3;
  cfg.h_init = 1e-2;
  Integrator stiff(1, cfg);
  CHECK_THROWS_AS(stiff.integrate([](double, std::span<const double> x, std::span<double> dx) {
    dx[0] = -1e9 * x[0];
  }, y, 0.0, 1.0), StepUnderflow);

  y = {1.0};
  Integrator blowup(1);
  CHECK_THROWS_AS(blowup.integrate([](double t, std::span<const double>, std::span<double> dx) {
    dx[0] = t > 0.5 ? std::nan("") : 0.0;
  }, y, 0.0, 1.0), NonFiniteState);
}

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.abs_tol = 1e-15;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.abs_tol = 1e-5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.h_min = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.method_order = 5;
  CHECK_THROWS_AS(Integrator(3, cfg), InvalidArgument);
}
