#include "dce/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dce/errors.hpp"

namespace dce {

std::size_t RichardsonResult::fallback_count() const {
  return static_cast<std::size_t>(std::count(fallback.begin(), fallback.end(), true));
}

RichardsonResult richardson(const TruncationSeries& series) {
  const std::size_t levels = series.Ns.size();
  if (levels < 3) throw InsufficientLevels("Richardson extrapolation needs at least 3 truncations");
  if (series.values.size() != levels) {
    throw InvalidArgument("extrapolation", "one value array per truncation is required");
  }
  for (std::size_t k = 1; k < levels; ++k) {
    if (series.Ns[k - 1] < 1 || series.Ns[k] != 2 * series.Ns[k - 1]) {
      throw NonGeometricNs("truncations must double at every level");
    }
  }
  const std::size_t width = series.values.front().size();
  for (const auto& v : series.values) {
    if (v.size() != width) throw InvalidArgument("extrapolation", "ragged value arrays");
    for (double x : v) {
      if (!std::isfinite(x)) throw InvalidArgument("extrapolation", "non-finite value");
    }
  }

  const auto& A1 = series.values[levels - 3];
  const auto& A2 = series.values[levels - 2];
  const auto& A4 = series.values[levels - 1];
  RichardsonResult r;
  r.limit.resize(width);
  r.order.resize(width);
  r.uncertainty.resize(width);
  r.fallback.assign(width, false);
  for (std::size_t i = 0; i < width; ++i) {
    const double d1 = A1[i] - A2[i];
    const double d2 = A2[i] - A4[i];
    if (d1 == 0.0 && d2 == 0.0) {
      r.limit[i] = A4[i];
      r.order[i] = std::numeric_limits<double>::quiet_NaN();
      r.uncertainty[i] = 0.0;
      continue;
    }
    const bool geometric = d2 != 0.0 && (d1 > 0.0) == (d2 > 0.0) && std::abs(d2) < std::abs(d1);
    if (!geometric) {
      r.limit[i] = A4[i];
      r.order[i] = std::numeric_limits<double>::quiet_NaN();
      r.uncertainty[i] = std::max({std::abs(d1), std::abs(d2), std::abs(A1[i] - A4[i])});
      r.fallback[i] = true;
      continue;
    }
    r.order[i] = std::log2(d1 / d2);
    r.limit[i] = A4[i] - d2 * d2 / (d1 - d2);
    r.uncertainty[i] = std::abs(r.limit[i] - A4[i]);
  }
  return r;
}

}  // namespace dce
