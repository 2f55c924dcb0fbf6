#include "dce/field3d.hpp"

#include <cmath>
#include <numbers>

#include "dce/errors.hpp"

namespace dce {

void Cavity3DParams::validate() const {
  if (!(Ly > 0.0) || !(Lz > 0.0) || !std::isfinite(Ly) || !std::isfinite(Lz)) {
    throw InvalidArgument("field3d", "transverse lengths must be positive and finite");
  }
  if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidArgument("field3d", "mass must be non-negative");
  if (N1 < 1) throw InvalidArgument("field3d", "N1 must be positive");
  for (const auto& [n2, n3] : sectors) {
    if (n2 < 1 || n3 < 1) {
      throw InvalidArgument("field3d", "transverse mode numbers start at 1");
    }
  }
}

double effective_mass_sq(int n2, int n3, double Ly, double Lz, double m) {
  const double ky = n2 * std::numbers::pi / Ly;
  const double kz = n3 * std::numbers::pi / Lz;
  return ky * ky + kz * kz + m * m;
}

CanonicalResult run_sector(double mass_sq, int N1, const Trajectory& trajectory,
                           const CanonicalConfig& base) {
  if (!(mass_sq >= 0.0) || !std::isfinite(mass_sq)) {
    throw InvalidArgument("field3d", "effective mass squared must be non-negative");
  }
  CanonicalConfig cfg = base;
  cfg.spectrum = {N1, mass_sq};
  return run_canonical(trajectory, cfg);
}

SectorResult evolve_sector(const Cavity3DParams& params, std::pair<int, int> sector,
                           const Trajectory& trajectory, const CanonicalConfig& base) {
  params.validate();
  const auto [n2, n3] = sector;
  if (n2 < 1 || n3 < 1) throw InvalidArgument("field3d", "transverse mode numbers start at 1");
  SectorResult r;
  r.n2 = n2;
  r.n3 = n3;
  r.mass_sq = effective_mass_sq(n2, n3, params.Ly, params.Lz, params.m);
  r.result = run_sector(r.mass_sq, params.N1, trajectory, base);
  r.result.pair.meta["sector"] = std::to_string(n2) + "," + std::to_string(n3);
  return r;
}

std::vector<SectorResult> evolve_sectors(const Cavity3DParams& params, const Trajectory& trajectory,
                                         const CanonicalConfig& base) {
  params.validate();
  std::vector<SectorResult> out;
  out.reserve(params.sectors.size());
  for (const auto& s : params.sectors) out.push_back(evolve_sector(params, s, trajectory, base));
  return out;
}

}  // namespace dce
