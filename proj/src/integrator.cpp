#include "dce/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dce/errors.hpp"

namespace dce {

namespace {

ButcherTableau make_rk87() {
  ButcherTableau t;
  t.order_high = 8;
  t.order_low = 7;
  t.c = {0.0,
         1.0 / 18.0,
         1.0 / 12.0,
         1.0 / 8.0,
         5.0 / 16.0,
         3.0 / 8.0,
         59.0 / 400.0,
         93.0 / 200.0,
         5490023248.0 / 9719169821.0,
         13.0 / 20.0,
         1201146811.0 / 1299019798.0,
         1.0,
         1.0};
  auto& a = t.a;
  a[1][0] = 1.0 / 18.0;

  a[2][0] = 1.0 / 48.0;
  a[2][1] = 1.0 / 16.0;

  a[3][0] = 1.0 / 32.0;
  a[3][2] = 3.0 / 32.0;

  a[4][0] = 5.0 / 16.0;
  a[4][2] = -75.0 / 64.0;
  a[4][3] = 75.0 / 64.0;

  a[5][0] = 3.0 / 80.0;
  a[5][3] = 3.0 / 16.0;
  a[5][4] = 3.0 / 20.0;

  a[6][0] = 29443841.0 / 614563906.0;
  a[6][3] = 77736538.0 / 692538347.0;
  a[6][4] = -28693883.0 / 1125000000.0;
  a[6][5] = 23124283.0 / 1800000000.0;

  a[7][0] = 16016141.0 / 946692911.0;
  a[7][3] = 61564180.0 / 158732637.0;
  a[7][4] = 22789713.0 / 633445777.0;
  a[7][5] = 545815736.0 / 2771057229.0;
  a[7][6] = -180193667.0 / 1043307555.0;

  a[8][0] = 39632708.0 / 573591083.0;
  a[8][3] = -433636366.0 / 683701615.0;
  a[8][4] = -421739975.0 / 2616292301.0;
  a[8][5] = 100302831.0 / 723423059.0;
  a[8][6] = 790204164.0 / 839813087.0;
  a[8][7] = 800635310.0 / 3783071287.0;

  a[9][0] = 246121993.0 / 1340847787.0;
  a[9][3] = -37695042795.0 / 15268766246.0;
  a[9][4] = -309121744.0 / 1061227803.0;
  a[9][5] = -12992083.0 / 490766935.0;
  a[9][6] = 6005943493.0 / 2108947869.0;
  a[9][7] = 393006217.0 / 1396673457.0;
  a[9][8] = 123872331.0 / 1001029789.0;

  a[10][0] = -1028468189.0 / 846180014.0;
  a[10][3] = 8478235783.0 / 508512852.0;
  a[10][4] = 1311729495.0 / 1432422823.0;
  a[10][5] = -10304129995.0 / 1701304382.0;
  a[10][6] = -48777925059.0 / 3047939560.0;
  a[10][7] = 15336726248.0 / 1032824649.0;
  a[10][8] = -45442868181.0 / 3398467696.0;
  a[10][9] = 3065993473.0 / 597172653.0;

  a[11][0] = 185892177.0 / 718116043.0;
  a[11][3] = -3185094517.0 / 667107341.0;
  a[11][4] = -477755414.0 / 1098053517.0;
  a[11][5] = -703635378.0 / 230739211.0;
  a[11][6] = 5731566787.0 / 1027545527.0;
  a[11][7] = 5232866602.0 / 850066563.0;
  a[11][8] = -4093664535.0 / 808688257.0;
  a[11][9] = 3962137247.0 / 1805957418.0;
  a[11][10] = 65686358.0 / 487910083.0;

  a[12][0] = 403863854.0 / 491063109.0;
  a[12][3] = -5068492393.0 / 434740067.0;
  a[12][4] = -411421997.0 / 543043805.0;
  a[12][5] = 652783627.0 / 914296604.0;
  a[12][6] = 11173962825.0 / 925320556.0;
  a[12][7] = -13158990841.0 / 6184727034.0;
  a[12][8] = 3936647629.0 / 1978049680.0;
  a[12][9] = -160528059.0 / 685178525.0;
  a[12][10] = 248638103.0 / 1413531060.0;

  t.b_high = {14005451.0 / 335480064.0,
              0.0,
              0.0,
              0.0,
              0.0,
              -59238493.0 / 1068277825.0,
              181606767.0 / 758867731.0,
              561292985.0 / 797845732.0,
              -1041891430.0 / 1371343529.0,
              760417239.0 / 1151165299.0,
              118820643.0 / 751138087.0,
              -528747749.0 / 2220607170.0,
              1.0 / 4.0};
  t.b_low = {13451932.0 / 455176623.0,
             0.0,
             0.0,
             0.0,
             0.0,
             -808719846.0 / 976000145.0,
             1757004468.0 / 5645159321.0,
             656045339.0 / 265891186.0,
             -3867574721.0 / 1518517206.0,
             465885868.0 / 322736535.0,
             53011238.0 / 667516719.0,
             2.0 / 45.0,
             0.0};
  return t;
}

// Step controller constants.
constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.7 / 8.0;
constexpr double kBeta = 0.4 / 8.0;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

struct Term {
  const double* k;
  double w;
};

// Elements per cache block in the stage combinations.
constexpr std::size_t kBlock = 2048;

// out[i] = y[i] + sum_t w_t k_t[i], summed in stage order. Blocked so each
// pass over the stage vectors stays in L1 while the inner loop vectorizes.
void combine(std::span<const double> y, const std::vector<Term>& terms, double* out) {
  const std::size_t n = y.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const int nt = static_cast<int>(terms.size());
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i0 = b * kBlock;
    const std::size_t i1 = std::min(n, i0 + kBlock);
    double acc[kBlock];
    const std::size_t len = i1 - i0;
    for (std::size_t i = 0; i < len; ++i) acc[i] = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double w = terms[t].w;
      const double* k = terms[t].k + i0;
      for (std::size_t i = 0; i < len; ++i) acc[i] += w * k[i];
    }
    for (std::size_t i = 0; i < len; ++i) out[i0 + i] = y[i0 + i] + acc[i];
  }
}

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

const ButcherTableau& rk87_tableau() {
  static const ButcherTableau t = make_rk87();
  return t;
}

void IntegratorConfig::validate() const {
  if (!(abs_tol >= 1e-14 && abs_tol <= 1e-6)) {
    throw InvalidArgument("integrator", "abs_tol must lie in [1e-14, 1e-6]");
  }
  if (!(rel_tol >= 0.0)) throw InvalidArgument("integrator", "rel_tol must be non-negative");
  if (!(h_min > 0.0)) throw InvalidArgument("integrator", "h_min must be positive");
  if (!(h_init >= 0.0)) throw InvalidArgument("integrator", "h_init must be non-negative");
  if (!(h_max > 0.0)) throw InvalidArgument("integrator", "h_max must be positive");
  if (method_order != 8) throw InvalidArgument("integrator", "only the order 8 pair is available");
}

Integrator::Integrator(std::size_t dim, IntegratorConfig cfg) : dim_(dim), cfg_(cfg) {
  cfg_.validate();
  k_.assign(ButcherTableau::kStages, std::vector<double>(dim));
  y_stage_.resize(dim);
  y_new_.resize(dim);
}

double Integrator::step(const RhsFn& f, double t, double h, std::span<const double> y,
                        bool have_k1) {
  const ButcherTableau& tab = rk87_tableau();
  if (!have_k1) {
    f(t, y, k_[0]);
    ++stats_.rhs_evals;
  }
  std::vector<Term> terms;
  terms.reserve(ButcherTableau::kStages);
  for (int s = 1; s < ButcherTableau::kStages; ++s) {
    terms.clear();
    for (int j = 0; j < s; ++j) {
      if (tab.a[s][j] != 0.0) terms.push_back({k_[j].data(), h * tab.a[s][j]});
    }
    combine(y, terms, y_stage_.data());
    f(t + tab.c[s] * h, y_stage_, k_[s]);
    ++stats_.rhs_evals;
  }

  terms.clear();
  for (int j = 0; j < ButcherTableau::kStages; ++j) {
    if (tab.b_high[j] != 0.0) terms.push_back({k_[j].data(), h * tab.b_high[j]});
  }
  combine(y, terms, y_new_.data());

  // Error estimate from the weight difference, accumulated per component.
  terms.clear();
  for (int j = 0; j < ButcherTableau::kStages; ++j) {
    const double d = h * (tab.b_high[j] - tab.b_low[j]);
    if (d != 0.0) terms.push_back({k_[j].data(), d});
  }
  const double atol = cfg_.abs_tol, rtol = cfg_.rel_tol;
  const std::size_t blocks = (dim_ + kBlock - 1) / kBlock;
  const int nt = static_cast<int>(terms.size());
  double err = 0.0;
#pragma omp parallel for schedule(static) reduction(max : err)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i0 = b * kBlock;
    const std::size_t len = std::min(dim_, i0 + kBlock) - i0;
    double e[kBlock];
    for (std::size_t i = 0; i < len; ++i) e[i] = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double w = terms[t].w;
      const double* k = terms[t].k + i0;
      for (std::size_t i = 0; i < len; ++i) e[i] += w * k[i];
    }
    double local = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double sc =
          atol + rtol * std::max(std::abs(y[i0 + i]), std::abs(y_new_[i0 + i]));
      const double r = std::abs(e[i]) / sc;
      // NaN propagates as infinity so the caller sees a non-finite error.
      local = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(local, r);
    }
    err = std::max(err, local);
  }
  return err;
}

double Integrator::initial_step(const RhsFn& f, double t, double dir, std::span<const double> y) {
  // Starting step heuristic from Hairer, Norsett & Wanner, Sec. II.4.
  std::vector<double>& f0 = k_[0];
  f(t, y, f0);
  ++stats_.rhs_evals;
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  const double n = static_cast<double>(std::max<std::size_t>(dim_, 1));
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;

  for (std::size_t i = 0; i < dim_; ++i) y_stage_[i] = y[i] + dir * h0 * f0[i];
  std::vector<double>& f1 = k_[1];
  f(t + dir * h0, y_stage_, f1);
  ++stats_.rhs_evals;
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
    const double v = (f1[i] - f0[i]) / sc;
    d2 += v * v;
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 9.0);
  return std::min({100.0 * h0, h1, cfg_.h_max});
}

void Integrator::integrate(const RhsFn& f, std::span<double> y, double t0, double t1,
                           std::span<const double> checkpoints, const Observer& observe) {
  if (y.size() != dim_) throw InvalidArgument("integrator", "state size mismatch");
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw InvalidArgument("integrator", "non-finite time bounds");
  }
  if (!all_finite(y)) throw NonFiniteState("initial state is not finite");

  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> stops;
  for (double c : checkpoints) {
    if (dir * (c - t0) > 0.0 && dir * (t1 - c) > 0.0) stops.push_back(c);
  }
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return dir * a < dir * b; });
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(t1);

  if (observe) observe(t0, y);
  if (t0 == t1) return;

  double h = cfg_.h_init > 0.0 ? std::min(cfg_.h_init, cfg_.h_max) : initial_step(f, t0, dir, y);
  double t = t0;
  double err_prev = 1.0;
  bool have_k1 = false;
  bool rejected_last = false;
  long steps = 0;

  for (double target : stops) {
    while (dir * (target - t) > 0.0) {
      if (++steps > cfg_.max_steps) throw StepUnderflow("maximum number of steps exceeded");
      const double remaining = std::abs(target - t);
      bool clipped = false;
      double h_try = h;
      // Stretch by up to 1% instead of leaving a sliver before the target.
      if (h_try >= remaining * 0.99) {
        h_try = remaining;
        clipped = true;
      }
      if (h_try < cfg_.h_min && !clipped) {
        throw StepUnderflow("required step below h_min at t = " + std::to_string(t));
      }

      const double err = step(f, t, dir * h_try, y, have_k1);
      if (!std::isfinite(err)) throw NonFiniteState("state overflow at t = " + std::to_string(t));

      if (err <= 1.0) {
        const double t_next = clipped ? target : t + dir * h_try;
        std::copy(y_new_.begin(), y_new_.end(), y.begin());
        t = t_next;
        have_k1 = false;
        ++stats_.accepted;
        stats_.h_last = h_try;
        stats_.h_smallest = std::min(stats_.h_smallest, h_try);

        double fac = err == 0.0 ? kFacMax
                                : kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
        fac = std::clamp(fac, kFacMin, kFacMax);
        if (rejected_last) fac = std::min(fac, 1.0);
        const double h_next = h_try * fac;
        // A clipped step says nothing about the natural step size: keep h.
        h = clipped ? std::max(h, h_next) : h_next;
        h = std::min(h, cfg_.h_max);
        err_prev = std::max(err, 1e-4);
        rejected_last = false;
      } else {
        ++stats_.rejected;
        const double fac = std::max(kFacMin, kSafety * std::pow(err, -1.0 / 8.0));
        h = h_try * fac;
        have_k1 = true;
        rejected_last = true;
      }
    }
    t = target;
    if (observe) observe(t, y);
  }
}

void Integrator::integrate_fixed(const RhsFn& f, std::span<double> y, double t0, double t1,
                                 long steps) {
  if (y.size() != dim_) throw InvalidArgument("integrator", "state size mismatch");
  if (steps < 1) throw InvalidArgument("integrator", "steps must be positive");
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + h * static_cast<double>(s);
    step(f, t, h, y, false);
    std::copy(y_new_.begin(), y_new_.end(), y.begin());
    ++stats_.accepted;
  }
  if (!all_finite(y)) throw NonFiniteState("state overflow in fixed-step run");
}

}  // namespace dce
