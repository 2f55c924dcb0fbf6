#include "dce/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "dce/errors.hpp"

namespace dce {

CanonicalResult run_canonical(const Trajectory& trajectory, const CanonicalConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const double t0 = trajectory.motion_start();
  const double tf = trajectory.motion_stop();
  const double t1 = cfg.tau_end.value_or(tf);
  if (t1 < tf) throw InvalidArgument("pipeline", "tau_end precedes the motion stop");
  if (!(cfg.indicator_spacing > 0.0)) {
    throw InvalidArgument("pipeline", "indicator spacing must be positive");
  }
  const TrajectorySample initial = trajectory.sample(t0);
  if (std::abs(initial.L - 1.0) > 1e-15) {
    throw InvalidArgument("pipeline", "the in basis assumes an initial cavity of unit width");
  }

  const ModeSystem system(trajectory, cfg.spectrum, cfg.kernel);
  BasisMatrix basis = in_basis(cfg.spectrum, t0);
  Integrator integ(basis.flat().size(), cfg.integrator);
  const RhsFn rhs = [&system](double t, std::span<const double> y, std::span<double> dy) {
    system.rhs(t, y, dy);
  };

  CanonicalResult result;
  result.L_final = trajectory.sample(tf).L;
  const OutBasis out(cfg.spectrum, tf, result.L_final);

  std::vector<double> marks;
  if (cfg.record_indicators) {
    const long count = static_cast<long>(std::floor((t1 - t0) / cfg.indicator_spacing));
    for (long k = 1; k <= count; ++k) marks.push_back(t0 + k * cfg.indicator_spacing);
  }
  marks.push_back(tf);

  // The observer sees the flat state; wrap it back into the basis view.
  BasisMatrix view(cfg.spectrum.N);
  const Observer observe = [&](double t, std::span<const double> y) {
    if (!cfg.record_indicators && t != tf) return;
    std::copy(y.begin(), y.end(), view.flat().begin());
    view.tau = t;
    if (cfg.record_indicators) result.indicators.record(view);
    if (t == tf) result.pair = extract_bogoliubov(view, out, tf);
  };
  integ.integrate(rhs, basis.flat(), t0, t1, marks, observe);
  basis.tau = t1;

  if (t1 > tf) result.pair_late = extract_bogoliubov(basis, out, tf);
  result.final_basis = std::move(basis);
  result.stats = integ.stats();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace dce
