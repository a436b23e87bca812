#pragma once

// Private sign-change counting used for oscillation (node-count) checks.

#include <cmath>
#include <span>

namespace stiffspec::detail {

/// Counts sign changes of the sampled values strictly inside the interval,
/// ignoring samples below tol_frac of the max amplitude (covers zeros landing
/// exactly on a node; eigenfunction zeros are simple so tangencies cannot
/// occur).
inline int internal_sign_changes(std::span<const double> values,
                                 double tol_frac = 1e-7) {
  double scale = 0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0) return 0;
  const double floor_ = tol_frac * scale;
  int changes = 0;
  double prev = 0;
  bool have_prev = false;
  // Skip the boundary samples; endpoint values are pinned to zero.
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    double v = values[i];
    if (std::abs(v) < floor_) continue;
    if (have_prev && std::signbit(v) != std::signbit(prev)) ++changes;
    prev = v;
    have_prev = true;
  }
  return changes;
}

}  // namespace stiffspec::detail
