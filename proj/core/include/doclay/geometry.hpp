#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doclay {

// Normalized coordinate range. Boxes are scaled onto [0, kCoordMax] per axis
// at ingestion so that thresholds mean the same thing on every page.
inline constexpr int kCoordMax = 1000;

// Axis-aligned box in normalized page coordinates; y grows downward.
struct BBox {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  constexpr int width() const noexcept { return right - left; }
  constexpr int height() const noexcept { return bottom - top; }
  constexpr long area() const noexcept { return static_cast<long>(width()) * height(); }

  friend constexpr bool operator==(const BBox&, const BBox&) = default;
};

// Throws ValidationError naming the first offending coordinate.
void validate(const BBox& box);
bool is_valid(const BBox& box) noexcept;

// "[l, t, r, b]"
std::string format_box(const BBox& box);

struct Point {
  double x = 0;
  double y = 0;
  friend constexpr bool operator==(const Point&, const Point&) = default;
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

enum class SpanKind { Overlap, Gap };

// Overlap carries the overlap length (>= 0); Gap carries the separation (> 0).
struct SpanRelation {
  SpanKind kind = SpanKind::Overlap;
  double amount = 0;

  bool overlaps() const noexcept { return kind == SpanKind::Overlap; }
  friend bool operator==(const SpanRelation&, const SpanRelation&) = default;
};

struct ProjectionRelation {
  SpanRelation horizontal;  // along x: [left, right]
  SpanRelation vertical;    // along y: [top, bottom]
  friend bool operator==(const ProjectionRelation&, const ProjectionRelation&) = default;
};

enum class Direction {
  Above,
  Below,
  Left,
  Right,
  AboveLeft,
  AboveRight,
  BelowLeft,
  BelowRight,
  Coincident,
};

enum class PageRegion {
  TopLeft,
  TopCenter,
  TopRight,
  MiddleLeft,
  Center,
  MiddleRight,
  BottomLeft,
  BottomCenter,
  BottomRight,
};

// Which branch of the minimum-distance rule applies to a pair of boxes.
enum class DistanceCase {
  Overlap,        // both projections overlap (touching included)
  HorizontalGap,  // only the vertical projections overlap
  VerticalGap,    // only the horizontal projections overlap
  Corner,         // neither projection overlaps
};

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(PageRegion r) noexcept;
std::string_view to_string(DistanceCase c) noexcept;
std::string_view to_string(SpanKind k) noexcept;
std::optional<Direction> parse_direction(std::string_view s) noexcept;
std::optional<PageRegion> parse_region(std::string_view s) noexcept;
std::optional<DistanceCase> parse_distance_case(std::string_view s) noexcept;

Direction opposite(Direction d) noexcept;

SpanRelation interval_relation(const Interval& a, const Interval& b);
ProjectionRelation projection_relation(const BBox& a, const BBox& b);
Point center(const BBox& b);

// Direction of b's center as seen from a's center.
Direction relative_direction(const BBox& a, const BBox& b);

DistanceCase distance_case(const ProjectionRelation& rel) noexcept;
double min_distance(const BBox& a, const BBox& b);

// Area of the intersection; 0 for disjoint or merely touching boxes.
long intersection_area(const BBox& a, const BBox& b) noexcept;

// Smallest box covering all inputs. Requires a non-empty range.
BBox union_box(const std::vector<BBox>& boxes);

struct IndexedBox {
  std::size_t index = 0;
  BBox box;
};

// The k candidates closest to `target` by min_distance, ascending, with ties
// going to the smaller index. A candidate whose index equals `exclude` is
// skipped.
std::vector<std::size_t> nearest_segments(const BBox& target,
                                          const std::vector<IndexedBox>& candidates,
                                          std::size_t k,
                                          std::optional<std::size_t> exclude = std::nullopt);

// Cell of a 3x3 grid containing the box center. Points on a dividing line
// belong to the upper / left cell.
PageRegion page_region(const BBox& b, double page_width, double page_height);

}  // namespace doclay
