#include <cmath>
#include <random>

#include "doctest.h"
#include "dce/errors.hpp"
#include "dce/extrapolation.hpp"

using namespace dce;

namespace {

TruncationSeries series_of(double (*f)(double), std::vector<int> Ns = {128, 256, 512}) {
  TruncationSeries s;
  s.Ns = Ns;
  for (int N : Ns) s.values.push_back({f(N)});
  return s;
}

}  // namespace

TEST_CASE("pure power laws are extrapolated exactly") {
  const auto a = richardson(series_of([](double N) { return 2.0 + 1.0 / N; }));
  CHECK(a.limit[0] == 2.0);
  CHECK(a.order[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!a.fallback[0]);

  const auto b = richardson(series_of([](double N) { return 3.0 + 5.0 / (N * N); }));
  CHECK(std::abs(b.limit[0] - 3.0) < 3.0 * 1e-14);
  CHECK(b.order[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("constant series") {
  const auto c = richardson(series_of([](double) { return 0.625; }));
  CHECK(c.limit[0] == 0.625);
  CHECK(c.uncertainty[0] == 0.0);
  CHECK(!c.fallback[0]);
}

TEST_CASE("non-monotone differences fall back and are flagged") {
  TruncationSeries s;
  s.Ns = {16, 32, 64};
  s.values = {{1.0, 1.0, 1.0}, {1.1, 0.9, 1.0}, {1.0, 0.85, 1.2}};
  const auto r = richardson(s);
  CHECK(r.fallback[0]);
  CHECK(r.limit[0] == 1.0);
  CHECK(r.uncertainty[0] == doctest::Approx(0.1));
  // d1 = 0.1, d2 = 0.05: regular entry.
  CHECK(!r.fallback[1]);
  // d1 = 0 but d2 != 0: fallback.
  CHECK(r.fallback[2]);
  CHECK(r.fallback_count() == 2);
}

TEST_CASE("only the last three levels enter") {
  TruncationSeries s;
  s.Ns = {8, 16, 32, 64};
  s.values = {{100.0}, {1.0 + 1.0 / 16}, {1.0 + 1.0 / 32}, {1.0 + 1.0 / 64}};
  CHECK(richardson(s).limit[0] == 1.0);
}

TEST_CASE("errors") {
  TruncationSeries two;
  two.Ns = {128, 256};
  two.values = {{1.0}, {1.0}};
  CHECK_THROWS_AS(richardson(two), InsufficientLevels);
  TruncationSeries uneven;
  uneven.Ns = {100, 200, 300};
  uneven.values = {{1.0}, {1.0}, {1.0}};
  CHECK_THROWS_AS(richardson(uneven), NonGeometricNs);
  TruncationSeries ragged;
  ragged.Ns = {1, 2, 4};
  ragged.values = {{1.0}, {1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(richardson(ragged), InvalidArgument);
}

TEST_CASE("affine invariance") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double L = u(rng), c = u(rng), p = 0.5 + std::abs(u(rng));
    TruncationSeries s;
    s.Ns = {64, 128, 256};
    for (int N : s.Ns) s.values.push_back({L + c * std::pow(N, -p)});
    const double a = u(rng) + 3.0, b = u(rng);
    TruncationSeries t = s;
    for (auto& v : t.values) v[0] = a * v[0] + b;
    const auto rs = richardson(s), rt = richardson(t);
    if (rs.fallback[0] || rt.fallback[0]) continue;
    CHECK(std::abs(rt.limit[0] - (a * rs.limit[0] + b)) < 1e-12 * (1 + std::abs(b) + a * std::abs(L)));
    CHECK(std::abs(rs.limit[0] - L) < 1e-10);
  }
}
