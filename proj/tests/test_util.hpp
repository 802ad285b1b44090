#pragma once

#include <algorithm>
#include <cstdint>

#include "doclay/geometry.hpp"
#include "doclay/rng.hpp"

namespace testutil {

// Box spanned by two uniformly random corners of the normalized square.
inline doclay::BBox random_box(doclay::Rng& rng) {
  const auto coord = [&] { return static_cast<int>(rng.uniform_int(0, doclay::kCoordMax)); };
  const int x1 = coord(), y1 = coord(), x2 = coord(), y2 = coord();
  return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
}

// Box with sides of at most `max_side`, uniformly placed.
inline doclay::BBox small_box(doclay::Rng& rng, int max_side) {
  const int w = static_cast<int>(rng.uniform_int(0, max_side));
  const int h = static_cast<int>(rng.uniform_int(0, max_side));
  const int l = static_cast<int>(rng.uniform_int(0, doclay::kCoordMax - w));
  const int t = static_cast<int>(rng.uniform_int(0, doclay::kCoordMax - h));
  return {l, t, l + w, t + h};
}

}  // namespace testutil
