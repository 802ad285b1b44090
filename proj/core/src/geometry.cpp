#include "doclay/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

constexpr std::string_view kDirectionNames[] = {
    "above", "below", "left", "right", "above-left",
    "above-right", "below-left", "below-right", "coincident",
};

constexpr std::string_view kRegionNames[] = {
    "top-left", "top-center", "top-right",
    "middle-left", "center", "middle-right",
    "bottom-left", "bottom-center", "bottom-right",
};

constexpr std::string_view kCaseNames[] = {"overlap", "horizontal-gap", "vertical-gap", "corner"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::string_view (&names)[N], std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

bool is_valid(const BBox& b) noexcept {
  auto in_range = [](int v) { return v >= 0 && v <= kCoordMax; };
  return in_range(b.left) && in_range(b.top) && in_range(b.right) && in_range(b.bottom) &&
         b.left <= b.right && b.top <= b.bottom;
}

void validate(const BBox& b) {
  const std::pair<const char*, int> coords[] = {
      {"left", b.left}, {"top", b.top}, {"right", b.right}, {"bottom", b.bottom}};
  for (const auto& [name, v] : coords) {
    if (v < 0 || v > kCoordMax) {
      throw ValidationError(name, fmt::format("coordinate {} outside [0, {}]", v, kCoordMax));
    }
  }
  if (b.left > b.right) {
    throw ValidationError("left/right", fmt::format("left {} > right {}", b.left, b.right));
  }
  if (b.top > b.bottom) {
    throw ValidationError("top/bottom", fmt::format("top {} > bottom {}", b.top, b.bottom));
  }
}

std::string format_box(const BBox& b) {
  return fmt::format("[{}, {}, {}, {}]", b.left, b.top, b.right, b.bottom);
}

std::string_view to_string(Direction d) noexcept { return kDirectionNames[static_cast<int>(d)]; }
std::string_view to_string(PageRegion r) noexcept { return kRegionNames[static_cast<int>(r)]; }
std::string_view to_string(DistanceCase c) noexcept { return kCaseNames[static_cast<int>(c)]; }
std::string_view to_string(SpanKind k) noexcept { return k == SpanKind::Overlap ? "overlap" : "gap"; }

std::optional<Direction> parse_direction(std::string_view s) noexcept {
  return lookup<Direction>(kDirectionNames, s);
}
std::optional<PageRegion> parse_region(std::string_view s) noexcept {
  return lookup<PageRegion>(kRegionNames, s);
}
std::optional<DistanceCase> parse_distance_case(std::string_view s) noexcept {
  return lookup<DistanceCase>(kCaseNames, s);
}

Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::Above: return Direction::Below;
    case Direction::Below: return Direction::Above;
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
    case Direction::AboveLeft: return Direction::BelowRight;
    case Direction::AboveRight: return Direction::BelowLeft;
    case Direction::BelowLeft: return Direction::AboveRight;
    case Direction::BelowRight: return Direction::AboveLeft;
    case Direction::Coincident: return Direction::Coincident;
  }
  return Direction::Coincident;
}

SpanRelation interval_relation(const Interval& a, const Interval& b) {
  if (!(a.lo <= a.hi)) throw ValidationError("a", fmt::format("interval lo {} > hi {}", a.lo, a.hi));
  if (!(b.lo <= b.hi)) throw ValidationError("b", fmt::format("interval lo {} > hi {}", b.lo, b.hi));
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (hi >= lo) return {SpanKind::Overlap, hi - lo};
  return {SpanKind::Gap, lo - hi};
}

ProjectionRelation projection_relation(const BBox& a, const BBox& b) {
  validate(a);
  validate(b);
  return {
      interval_relation({double(a.left), double(a.right)}, {double(b.left), double(b.right)}),
      interval_relation({double(a.top), double(a.bottom)}, {double(b.top), double(b.bottom)}),
  };
}

Point center(const BBox& b) {
  validate(b);
  return {(b.left + b.right) / 2.0, (b.top + b.bottom) / 2.0};
}

Direction relative_direction(const BBox& a, const BBox& b) {
  const Point ca = center(a);
  const Point cb = center(b);
  const int sx = (cb.x > ca.x) - (cb.x < ca.x);
  const int sy = (cb.y > ca.y) - (cb.y < ca.y);
  if (sy < 0) return sx < 0 ? Direction::AboveLeft : sx > 0 ? Direction::AboveRight : Direction::Above;
  if (sy > 0) return sx < 0 ? Direction::BelowLeft : sx > 0 ? Direction::BelowRight : Direction::Below;
  return sx < 0 ? Direction::Left : sx > 0 ? Direction::Right : Direction::Coincident;
}

DistanceCase distance_case(const ProjectionRelation& rel) noexcept {
  const bool h = rel.horizontal.overlaps();
  const bool v = rel.vertical.overlaps();
  if (h && v) return DistanceCase::Overlap;
  if (v) return DistanceCase::HorizontalGap;
  if (h) return DistanceCase::VerticalGap;
  return DistanceCase::Corner;
}

double min_distance(const BBox& a, const BBox& b) {
  const ProjectionRelation rel = projection_relation(a, b);
  switch (distance_case(rel)) {
    case DistanceCase::Overlap: return 0.0;
    case DistanceCase::HorizontalGap: return rel.horizontal.amount;
    case DistanceCase::VerticalGap: return rel.vertical.amount;
    case DistanceCase::Corner: return std::hypot(rel.horizontal.amount, rel.vertical.amount);
  }
  return 0.0;
}

long intersection_area(const BBox& a, const BBox& b) noexcept {
  const long w = std::min(a.right, b.right) - std::max(a.left, b.left);
  const long h = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  return (w > 0 && h > 0) ? w * h : 0;
}

BBox union_box(const std::vector<BBox>& boxes) {
  if (boxes.empty()) throw ValidationError("boxes", "union of an empty set");
  BBox u = boxes.front();
  for (const BBox& b : boxes) {
    u.left = std::min(u.left, b.left);
    u.top = std::min(u.top, b.top);
    u.right = std::max(u.right, b.right);
    u.bottom = std::max(u.bottom, b.bottom);
  }
  return u;
}

std::vector<std::size_t> nearest_segments(const BBox& target,
                                          const std::vector<IndexedBox>& candidates,
                                          std::size_t k,
                                          std::optional<std::size_t> exclude) {
  if (k == 0) throw ValidationError("k", "must be at least 1");
  if (candidates.empty()) throw ValidationError("candidates", "empty candidate list");

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(candidates.size());
  for (const IndexedBox& c : candidates) {
    if (exclude && c.index == *exclude) continue;
    ranked.emplace_back(min_distance(target, c.box), c.index);
  }
  const std::size_t n = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end());

  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ranked[i].second);
  return out;
}

PageRegion page_region(const BBox& b, double page_width, double page_height) {
  if (!(page_width > 0)) throw ValidationError("page_width", "must be positive");
  if (!(page_height > 0)) throw ValidationError("page_height", "must be positive");
  const Point c = center(b);
  if (c.x < 0 || c.x > page_width) {
    throw ValidationError("x", fmt::format("center {} outside [0, {}]", c.x, page_width));
  }
  if (c.y < 0 || c.y > page_height) {
    throw ValidationError("y", fmt::format("center {} outside [0, {}]", c.y, page_height));
  }
  // Compare 3c against multiples of the side so w/3 boundaries are exact.
  auto third = [](double v, double side) { return 3 * v <= side ? 0 : 3 * v <= 2 * side ? 1 : 2; };
  return static_cast<PageRegion>(third(c.y, page_height) * 3 + third(c.x, page_width));
}

}  // namespace doclay
