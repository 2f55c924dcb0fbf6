#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "dce/errors.hpp"
#include "dce/trajectory.hpp"

using namespace dce;

namespace {

constexpr double kPi = std::numbers::pi;

TrajectoryParams one_mirror() { return *preset_trajectory("one-mirror"); }

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("bump values") {
  CHECK(bump(0.0, 0.1, 1.0) == 0.0);
  CHECK(bump(2.0, 0.1, 1.0) == 0.0);
  CHECK(bump(-3.0, 0.1, 1.0) == 0.0);
  CHECK(bump(1.0, 0.1, 1.0) == 1.0);
  // 1 - 1/(1 - 1/4) = -1/3, times 1/sigma
  CHECK(bump(0.5, 0.1, 1.0) == doctest::Approx(std::exp(-10.0 / 3.0)).epsilon(1e-15));
  CHECK(bump(0.5, 0.1, 1.0) == doctest::Approx(0.0356740).epsilon(1e-6));
}

TEST_CASE("bump rejects bad input") {
  CHECK_THROWS_AS(bump(std::numeric_limits<double>::quiet_NaN(), 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bump(std::numeric_limits<double>::infinity(), 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bump(0.5, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bump(0.5, 0.1, -1.0), InvalidArgument);
}

TEST_CASE("bump stays in [0,1] and vanishes at the edges") {
  for (int k = -10; k <= 210; ++k) {
    const double t = k / 100.0;
    const double b = bump(t, 0.1, 1.0);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
  for (double eps : {1e-2, 1e-3}) {
    const Jet3 lo = window_jet(WindowKind::bump, eps, 0.1, 1.0);
    const Jet3 hi = window_jet(WindowKind::bump, 2.0 - eps, 0.1, 1.0);
    for (const Jet3& j : {lo, hi}) {
      CHECK(std::abs(j.v) < 1e-20);
      CHECK(std::abs(j.d1) < 1e-15);
      CHECK(std::abs(j.d2) < 1e-10);
      CHECK(std::abs(j.d3) < 1e-5);
    }
  }
}

TEST_CASE("sample at the ends of the motion window is static") {
  const auto p = one_mirror();
  const auto s0 = sample(p, 0.0);
  CHECK(s0.f == 0.0);
  CHECK(s0.g == 1.0);
  CHECK(s0.L == 1.0);
  CHECK(s0.fdot == 0.0);
  CHECK(s0.gdot == 0.0);
  CHECK(s0.Ldot == 0.0);
  const auto s1 = sample(p, 2.5);
  CHECK(s1.f == 0.0);
  CHECK(s1.g == 1.0);
  CHECK(s1.Ldot == 0.0);
}

TEST_CASE("L = g - f and Ldot = gdot - fdot exactly") {
  auto p = one_mirror();
  p.eps2 = 1.0 / 40.0;
  p.phi = 0.3;
  for (int k = 0; k <= 400; ++k) {
    const auto s = sample(p, k * 0.005);
    CHECK(s.L == s.g - s.f);
    CHECK(s.Ldot == s.gdot - s.fdot);
  }
}

TEST_CASE("analytic derivatives match central differences") {
  for (WindowKind kind : {WindowKind::bump, WindowKind::gaussian}) {
    TrajectoryParams p;
    p.eps1 = 1.0 / 40.0;
    p.eps2 = 1.0 / 50.0;
    p.q = 10.0;
    p.phi = 1.1;
    p.window = kind;
    const OscillatingTrajectory traj(p);
    const double h = 1e-6;
    for (int k = 5; k <= 195; k += 7) {
      const double t = k / 100.0;
      for (bool right : {false, true}) {
        auto eval = [&](double s) { return right ? traj.right(s) : traj.left(s); };
        const Jet3 j = eval(t), jp = eval(t + h), jm = eval(t - h);
        // Each derivative checked against the FD of the one below it.
        const double scale1 = 1.0, scale2 = 40.0, scale3 = 1500.0;
        CHECK(std::abs(j.d1 - (jp.v - jm.v) / (2 * h)) < 1e-6 * scale1);
        CHECK(std::abs(j.d2 - (jp.d1 - jm.d1) / (2 * h)) < 1e-6 * scale2);
        CHECK(std::abs(j.d3 - (jp.d2 - jm.d2) / (2 * h)) < 1e-6 * scale3);
      }
    }
  }
}

TEST_CASE("peak left-mirror speed tracks eps2 q pi max(B)") {
  TrajectoryParams p;
  p.eps2 = 1.0 / 40.0;
  p.q = 10.0;
  double vmax = 0.0;
  double fd_max = 0.0;
  const double h = 1e-6;
  for (int k = 1; k < 20000; ++k) {
    const double t = k * 1e-4;
    vmax = std::max(vmax, std::abs(sample(p, t).fdot));
    const double fd = (sample(p, t + h).f - sample(p, t - h).f) / (2 * h);
    fd_max = std::max(fd_max, std::abs(fd));
  }
  const double bound = p.eps2 * p.q * kPi;
  CHECK(rel_err(vmax, fd_max) < 1e-6);
  // B' is small near the peak of B, so the envelope bound is nearly attained.
  CHECK(vmax <= bound * 1.02);
  CHECK(vmax >= bound * 0.95);
}

TEST_CASE("validate") {
  TrajectoryParams stat;
  CHECK(validate(stat).empty());

  TrajectoryParams fast;
  fast.eps2 = 1.5 / (fast.q * kPi);
  auto v = validate(fast);
  REQUIRE(!v.empty());
  CHECK(v.front().quantity == "fdot");
  CHECK(std::abs(v.front().value) >= 1.0);

  TrajectoryParams pair = *preset_trajectory("opposite-phase");
  CHECK(pair.eps1 == 1.0 / 40.0);
  CHECK(pair.eps2 == 1.0 / 40.0);
  CHECK(validate(pair).empty());

  TrajectoryParams bad;
  bad.sigma = 0.0;
  REQUIRE(!validate(bad).empty());
  CHECK(validate(bad).front().quantity == "sigma");

  CustomTrajectory collapsing([](const Jet3&) { return Jet3::constant(0.0); },
                              [](const Jet3& t) { return 1.0 - 1.5 * sin(0.5 * t); }, 0.0, 2.0);
  const auto w = validate(collapsing, 1000);
  REQUIRE(w.size() == 1);
  CHECK(w.front().quantity == "L");
}

TEST_CASE("custom trajectory through the interface") {
  CustomTrajectory traj([](const Jet3&) { return Jet3::constant(0.0); },
                        [](const Jet3& t) { return 1.0 + 0.01 * sin(t * kPi); }, 0.0, 2.0);
  const auto s = traj.sample(0.5);
  CHECK(s.g == doctest::Approx(1.01));
  CHECK(s.gdot == doctest::Approx(0.01 * kPi * std::cos(0.5 * kPi)));
  CHECK(validate(traj, 1000).empty());
  CHECK_THROWS_AS(CustomTrajectory({}, {}, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() == 5);
  CHECK(!preset_trajectory("nope").has_value());
  const auto g = *preset_trajectory("gaussian-window");
  CHECK(g.window == WindowKind::gaussian);
  CHECK(g.gamma == 2.5);
  for (const auto& n : names) CHECK(validate(*preset_trajectory(n)).empty());
}
