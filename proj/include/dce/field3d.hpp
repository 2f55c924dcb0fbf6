#pragma once

#include <utility>
#include <vector>

#include "dce/pipeline.hpp"

namespace dce {

/// Parallelepiped cavity with the moving walls along x and fixed transverse
/// lengths. Each transverse pair (n2, n3) is an independent 1+1 sector.
struct Cavity3DParams {
  double Ly = 1.0;
  double Lz = 1.0;
  double m = 0.0;
  int N1 = 64;
  std::vector<std::pair<int, int>> sectors{{1, 1}};

  /// Throws InvalidArgument on non-positive lengths, negative mass, N1 < 1 or
  /// a transverse index below 1.
  void validate() const;
};

/// mu^2 = (n2 pi/Ly)^2 + (n3 pi/Lz)^2 + m^2.
double effective_mass_sq(int n2, int n3, double Ly, double Lz, double m);

struct SectorResult {
  int n2 = 1;
  int n3 = 1;
  double mass_sq = 0.0;
  CanonicalResult result;
};

/// The 1+1 pipeline with spectrum {N1, mass_sq}; every sector goes through here.
CanonicalResult run_sector(double mass_sq, int N1, const Trajectory& trajectory,
                           const CanonicalConfig& base);

/// Runs the 1+1 pipeline for one sector with spectrum {N1, mu^2}. The
/// integrator, kernel and indicator settings come from `base`; its spectrum
/// is replaced.
SectorResult evolve_sector(const Cavity3DParams& params, std::pair<int, int> sector,
                           const Trajectory& trajectory, const CanonicalConfig& base);

/// All sectors listed in params, in order.
std::vector<SectorResult> evolve_sectors(const Cavity3DParams& params, const Trajectory& trajectory,
                                         const CanonicalConfig& base);

}  // namespace dce
