#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dce/bogoliubov.hpp"
#include "dce/dynamics.hpp"
#include "dce/integrator.hpp"
#include "dce/trajectory.hpp"

namespace dce {

struct CanonicalConfig {
  ModeSpectrum spectrum;
  IntegratorConfig integrator;
  KernelKind kernel = KernelKind::parallel;
  /// Integration starts at trajectory.motion_start(); the basis is in its
  /// initial state there. End time defaults to the motion stop.
  std::optional<double> tau_end;
  /// Error indicators are recorded on this uniform grid (plus the endpoints).
  double indicator_spacing = 0.01;
  bool record_indicators = true;
};

struct CanonicalResult {
  /// Extracted at the motion stop, which is also the out-basis phase reference.
  BogoliubovPair pair;
  /// Extracted at tau_end, when tau_end lies after the motion stop.
  std::optional<BogoliubovPair> pair_late;
  BasisMatrix final_basis;
  ErrorIndicators indicators;
  IntegratorStats stats;
  double L_final = 1.0;
  double wall_seconds = 0.0;
};

/// Evolves the in basis across the motion and extracts Bogoliubov data.
CanonicalResult run_canonical(const Trajectory& trajectory, const CanonicalConfig& cfg);

}  // namespace dce
