#pragma once

#include <vector>

namespace dce {

/// One observable array per truncation, all on a common index window.
struct TruncationSeries {
  std::vector<int> Ns;
  std::vector<std::vector<double>> values;
};

/// Per-entry three-level Richardson estimate from the three largest Ns.
/// With d1 = A_N - A_2N and d2 = A_2N - A_4N:
///   order = log2(d1/d2), limit = A_4N - d2^2/(d1 - d2), uncertainty = |limit - A_4N|.
/// Entries whose differences change sign, do not shrink, or where only the
/// second difference vanishes fall back to A_4N with uncertainty equal to the
/// largest pairwise difference and are flagged. Constant entries return
/// A_4N with zero uncertainty and an undefined (NaN) order.
struct RichardsonResult {
  std::vector<double> limit;
  std::vector<double> order;
  std::vector<double> uncertainty;
  std::vector<bool> fallback;

  std::size_t fallback_count() const;
};

/// Throws InsufficientLevels for fewer than 3 truncations, NonGeometricNs
/// unless consecutive Ns double, InvalidArgument for ragged or non-finite data.
RichardsonResult richardson(const TruncationSeries& series);

}  // namespace dce
