#pragma once

// Reference implementations used to check the library. Each one computes
// its answer by a different route than the production code: exhaustive
// enumeration or point sampling rather than interval case analysis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doclay/geometry.hpp"

namespace oracle {

// Integer points on the boundary of a box, one unit apart.
inline std::vector<std::pair<int, int>> boundary_points(const doclay::BBox& b) {
  std::vector<std::pair<int, int>> pts;
  for (int x = b.left; x <= b.right; ++x) {
    pts.emplace_back(x, b.top);
    pts.emplace_back(x, b.bottom);
  }
  for (int y = b.top; y <= b.bottom; ++y) {
    pts.emplace_back(b.left, y);
    pts.emplace_back(b.right, y);
  }
  return pts;
}

inline bool contains(const doclay::BBox& b, int x, int y) {
  return x >= b.left && x <= b.right && y >= b.top && y <= b.bottom;
}

// Minimum distance between two boxes by sampling both boundaries at
// resolution 1 and taking the closest pair. Zero when a boundary point of
// one box lies inside the other, which covers every intersecting pair.
inline double sampled_distance(const doclay::BBox& a, const doclay::BBox& b) {
  const auto pa = boundary_points(a);
  const auto pb = boundary_points(b);
  for (const auto& [x, y] : pa) {
    if (contains(b, x, y)) return 0.0;
  }
  for (const auto& [x, y] : pb) {
    if (contains(a, x, y)) return 0.0;
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& [ax, ay] : pa) {
    for (const auto& [bx, by] : pb) {
      const std::int64_t dx = ax - bx;
      const std::int64_t dy = ay - by;
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return std::sqrt(static_cast<double>(best));
}

// Whether two integer intervals share a point, by enumeration.
inline bool shares_point(int alo, int ahi, int blo, int bhi) {
  for (int v = alo; v <= ahi; ++v) {
    if (v >= blo && v <= bhi) return true;
  }
  return false;
}

enum class Case { Overlap, HorizontalGap, VerticalGap, Corner };

inline Case classify(const doclay::BBox& a, const doclay::BBox& b) {
  const bool x = shares_point(a.left, a.right, b.left, b.right);
  const bool y = shares_point(a.top, a.bottom, b.top, b.bottom);
  if (x && y) return Case::Overlap;
  if (y) return Case::HorizontalGap;
  if (x) return Case::VerticalGap;
  return Case::Corner;
}

inline doclay::DistanceCase to_library(Case c) {
  switch (c) {
    case Case::Overlap: return doclay::DistanceCase::Overlap;
    case Case::HorizontalGap: return doclay::DistanceCase::HorizontalGap;
    case Case::VerticalGap: return doclay::DistanceCase::VerticalGap;
    case Case::Corner: return doclay::DistanceCase::Corner;
  }
  return doclay::DistanceCase::Overlap;
}

}  // namespace oracle

namespace oracle {

// Largest whitespace gap strictly between covered stretches of one axis,
// found by marking integer and half-integer positions on a doubled grid.
// Zero when the projection is one connected stretch.
inline int largest_gap(const std::vector<doclay::BBox>& boxes, bool y_axis) {
  std::vector<bool> covered(2 * doclay::kCoordMax + 1, false);
  for (const doclay::BBox& b : boxes) {
    const int lo = y_axis ? b.top : b.left;
    const int hi = y_axis ? b.bottom : b.right;
    for (int p = 2 * lo; p <= 2 * hi; ++p) covered[static_cast<std::size_t>(p)] = true;
  }
  int best = 0;
  int last_covered = -1;
  for (int p = 0; p < static_cast<int>(covered.size()); ++p) {
    if (!covered[static_cast<std::size_t>(p)]) continue;
    if (last_covered >= 0 && p - last_covered > 1) best = std::max(best, (p - last_covered) / 2);
    last_covered = p;
  }
  return best;
}

}  // namespace oracle
