#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "doclay/error.hpp"
#include "doclay/geometry.hpp"
#include "doclay/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace doclay;

namespace {

TEST(BBox, AccessorsAndFormatting) {
  const BBox b{10, 20, 110, 70};
  EXPECT_EQ(b.width(), 100);
  EXPECT_EQ(b.height(), 50);
  EXPECT_EQ(b.area(), 5000);
  EXPECT_EQ(format_box(b), "[10, 20, 110, 70]");
}

TEST(BBox, ValidationNamesTheCoordinate) {
  EXPECT_NO_THROW(validate(BBox{0, 0, 1000, 1000}));
  EXPECT_NO_THROW(validate(BBox{5, 5, 5, 5}));
  try {
    validate(BBox{0, -1, 10, 10});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.where(), "top");
  }
  try {
    validate(BBox{20, 0, 10, 10});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.where(), "left/right");
  }
  EXPECT_THROW(validate(BBox{0, 0, 1001, 10}), ValidationError);
  EXPECT_FALSE(is_valid(BBox{0, 20, 10, 10}));
  EXPECT_TRUE(is_valid(BBox{0, 0, 0, 0}));
}

TEST(Interval, OverlapGapAndTouching) {
  EXPECT_EQ(interval_relation({0, 10}, {5, 20}), (SpanRelation{SpanKind::Overlap, 5}));
  EXPECT_EQ(interval_relation({0, 10}, {10, 20}), (SpanRelation{SpanKind::Overlap, 0}));
  EXPECT_EQ(interval_relation({0, 10}, {13, 20}), (SpanRelation{SpanKind::Gap, 3}));
  EXPECT_EQ(interval_relation({13, 20}, {0, 10}), (SpanRelation{SpanKind::Gap, 3}));
  EXPECT_EQ(interval_relation({0, 100}, {40, 60}), (SpanRelation{SpanKind::Overlap, 20}));
  EXPECT_THROW(interval_relation({5, 1}, {0, 1}), ValidationError);
}

TEST(Interval, GapMatchesEnumeration) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    int a = static_cast<int>(rng.uniform_int(0, 200)), b = static_cast<int>(rng.uniform_int(0, 200));
    int c = static_cast<int>(rng.uniform_int(0, 200)), d = static_cast<int>(rng.uniform_int(0, 200));
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    // Count shared integer points and the smallest separation by scanning.
    int shared = 0;
    int gap = 1 << 30;
    for (int x = a; x <= b; ++x) {
      for (int y = c; y <= d; ++y) {
        if (x == y) ++shared;
        gap = std::min(gap, std::abs(x - y));
      }
    }
    const SpanRelation r = interval_relation({double(a), double(b)}, {double(c), double(d)});
    if (shared > 0) {
      ASSERT_TRUE(r.overlaps());
      ASSERT_EQ(r.amount, shared - 1);
    } else {
      ASSERT_FALSE(r.overlaps());
      ASSERT_EQ(r.amount, gap);
    }
  }
}

TEST(Center, HalfUnits) {
  EXPECT_EQ(center(BBox{0, 0, 15, 10}), (Point{7.5, 5}));
}

TEST(Direction, EightSectorsAndCoincident) {
  const BBox a{400, 400, 600, 600};
  EXPECT_EQ(relative_direction(a, BBox{450, 100, 550, 200}), Direction::Above);
  EXPECT_EQ(relative_direction(a, BBox{450, 800, 550, 900}), Direction::Below);
  EXPECT_EQ(relative_direction(a, BBox{0, 450, 100, 550}), Direction::Left);
  EXPECT_EQ(relative_direction(a, BBox{800, 450, 900, 550}), Direction::Right);
  EXPECT_EQ(relative_direction(a, BBox{0, 0, 100, 100}), Direction::AboveLeft);
  EXPECT_EQ(relative_direction(a, BBox{900, 0, 1000, 100}), Direction::AboveRight);
  EXPECT_EQ(relative_direction(a, BBox{0, 900, 100, 1000}), Direction::BelowLeft);
  EXPECT_EQ(relative_direction(a, BBox{900, 900, 1000, 1000}), Direction::BelowRight);
  EXPECT_EQ(relative_direction(a, BBox{300, 300, 700, 700}), Direction::Coincident);
}

TEST(Direction, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(Direction::Coincident); ++i) {
    const auto d = static_cast<Direction>(i);
    EXPECT_EQ(parse_direction(to_string(d)), d);
    EXPECT_EQ(opposite(opposite(d)), d);
  }
  EXPECT_EQ(to_string(Direction::AboveLeft), "above-left");
  EXPECT_FALSE(parse_direction("north").has_value());
}

TEST(Direction, SwappingArgumentsGivesOpposite) {
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    const BBox a = testutil::random_box(rng);
    const BBox b = testutil::random_box(rng);
    ASSERT_EQ(relative_direction(b, a), opposite(relative_direction(a, b)));
  }
}

TEST(MinDistance, ThreeCases) {
  const BBox a{100, 100, 200, 200};
  EXPECT_EQ(min_distance(a, BBox{150, 150, 300, 300}), 0.0);
  EXPECT_EQ(min_distance(a, BBox{200, 200, 300, 300}), 0.0);  // corner touch
  EXPECT_EQ(min_distance(a, BBox{230, 120, 300, 180}), 30.0);
  EXPECT_EQ(min_distance(a, BBox{120, 240, 180, 300}), 40.0);
  EXPECT_DOUBLE_EQ(min_distance(a, BBox{230, 240, 300, 300}), 50.0);  // 30-40-50
  EXPECT_EQ(distance_case(projection_relation(a, BBox{230, 120, 300, 180})), DistanceCase::HorizontalGap);
  EXPECT_EQ(distance_case(projection_relation(a, BBox{120, 240, 180, 300})), DistanceCase::VerticalGap);
  EXPECT_EQ(distance_case(projection_relation(a, BBox{230, 240, 300, 300})), DistanceCase::Corner);
}

TEST(MinDistance, RejectsInvalidBoxes) {
  EXPECT_THROW(min_distance(BBox{10, 0, 0, 10}, BBox{0, 0, 1, 1}), ValidationError);
}

TEST(MinDistance, MatchesSampledOracleOnSmallBoxes) {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const BBox a = testutil::small_box(rng, 120);
    const BBox b = testutil::small_box(rng, 120);
    const double got = min_distance(a, b);
    ASSERT_NEAR(got, oracle::sampled_distance(a, b), 1.5) << format_box(a) << " " << format_box(b);
    ASSERT_EQ(distance_case(projection_relation(a, b)), oracle::to_library(oracle::classify(a, b)));
  }
}

TEST(MinDistance, SymmetricNonNegativeAndZeroOnSelf) {
  Rng rng(41);
  for (int i = 0; i < 5000; ++i) {
    const BBox a = testutil::random_box(rng);
    const BBox b = testutil::random_box(rng);
    const double d = min_distance(a, b);
    ASSERT_GE(d, 0.0);
    ASSERT_EQ(d, min_distance(b, a));
    ASSERT_EQ(min_distance(a, a), 0.0);
    ASSERT_EQ(d == 0.0, distance_case(projection_relation(a, b)) == DistanceCase::Overlap);
  }
}

TEST(MinDistance, TranslationInvariant) {
  Rng rng(43);
  for (int i = 0; i < 2000; ++i) {
    const BBox a = testutil::small_box(rng, 300);
    const BBox b = testutil::small_box(rng, 300);
    const int dx = static_cast<int>(rng.uniform_int(-1000, 1000));
    const int dy = static_cast<int>(rng.uniform_int(-1000, 1000));
    const BBox ta{a.left + dx, a.top + dy, a.right + dx, a.bottom + dy};
    const BBox tb{b.left + dx, b.top + dy, b.right + dx, b.bottom + dy};
    if (!is_valid(ta) || !is_valid(tb)) continue;
    ASSERT_DOUBLE_EQ(min_distance(ta, tb), min_distance(a, b));
  }
}

TEST(IntersectionArea, TouchingIsZero) {
  EXPECT_EQ(intersection_area(BBox{0, 0, 10, 10}, BBox{10, 0, 20, 10}), 0);
  EXPECT_EQ(intersection_area(BBox{0, 0, 10, 10}, BBox{5, 5, 20, 20}), 25);
  EXPECT_EQ(intersection_area(BBox{0, 0, 10, 10}, BBox{50, 50, 60, 60}), 0);
}

TEST(IntersectionArea, MatchesUnitCellCount) {
  Rng rng(47);
  for (int i = 0; i < 300; ++i) {
    const BBox a = testutil::small_box(rng, 40);
    const int dx = static_cast<int>(rng.uniform_int(-30, 30));
    const int dy = static_cast<int>(rng.uniform_int(-30, 30));
    const BBox b{a.left + dx, a.top + dy, a.right + dx / 2, a.bottom + dy / 2};
    if (!is_valid(b)) continue;
    const BBox u = union_box({a, b});
    long cells = 0;
    for (int x = u.left; x < u.right; ++x) {
      for (int y = u.top; y < u.bottom; ++y) {
        const bool in_a = x >= a.left && x < a.right && y >= a.top && y < a.bottom;
        const bool in_b = x >= b.left && x < b.right && y >= b.top && y < b.bottom;
        cells += in_a && in_b;
      }
    }
    ASSERT_EQ(intersection_area(a, b), cells);
  }
}

TEST(UnionBox, CoversInputs) {
  EXPECT_EQ(union_box({BBox{10, 20, 30, 40}, BBox{0, 25, 15, 90}}), (BBox{0, 20, 30, 90}));
  EXPECT_THROW(union_box({}), ValidationError);
}

TEST(NearestSegments, OrderAndTieBreak) {
  const BBox target{500, 500, 510, 510};
  const std::vector<IndexedBox> c{
      {0, {600, 500, 610, 510}},  // 90
      {1, {300, 500, 310, 510}},  // 190
      {2, {500, 400, 510, 410}},  // 90, tie with 0
      {3, {520, 500, 530, 510}},  // 10
      {4, {505, 505, 506, 506}},  // 0
  };
  EXPECT_EQ(nearest_segments(target, c, 3), (std::vector<std::size_t>{4, 3, 0}));
  EXPECT_EQ(nearest_segments(target, c, 4), (std::vector<std::size_t>{4, 3, 0, 2}));
  EXPECT_EQ(nearest_segments(target, c, 2, std::size_t{4}), (std::vector<std::size_t>{3, 0}));
  EXPECT_EQ(nearest_segments(target, c, 10).size(), 5u);
  EXPECT_THROW(nearest_segments(target, c, 0), ValidationError);
  EXPECT_THROW(nearest_segments(target, {}, 1), ValidationError);
}

TEST(NearestSegments, StableUnderCandidatePermutation) {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const BBox target = testutil::small_box(rng, 100);
    std::vector<IndexedBox> c;
    for (std::size_t i = 0; i < 12; ++i) c.push_back({i, testutil::small_box(rng, 100)});
    const auto want = nearest_segments(target, c, 5);
    for (std::size_t i = c.size() - 1; i > 0; --i) {
      std::swap(c[i], c[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    ASSERT_EQ(nearest_segments(target, c, 5), want);
  }
}

TEST(PageRegion, GridCellsAndBoundaries) {
  EXPECT_EQ(page_region(BBox{0, 0, 10, 10}, 1000, 1000), PageRegion::TopLeft);
  EXPECT_EQ(page_region(BBox{490, 490, 510, 510}, 1000, 1000), PageRegion::Center);
  EXPECT_EQ(page_region(BBox{990, 990, 1000, 1000}, 1000, 1000), PageRegion::BottomRight);
  EXPECT_EQ(page_region(BBox{990, 0, 1000, 10}, 1000, 1000), PageRegion::TopRight);
  // Exactly on the first dividing line of a 900-wide page.
  EXPECT_EQ(page_region(BBox{300, 600, 300, 600}, 900, 900), PageRegion::MiddleLeft);
  EXPECT_EQ(page_region(BBox{301, 601, 301, 601}, 900, 900), PageRegion::BottomCenter);
  EXPECT_EQ(to_string(PageRegion::Center), "center");
  EXPECT_EQ(parse_region("bottom-left"), PageRegion::BottomLeft);
}

TEST(PageRegion, CenterOutsidePageNamesAxis) {
  try {
    page_region(BBox{900, 0, 1000, 10}, 500, 1000);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.where(), "x");
  }
  EXPECT_THROW(page_region(BBox{0, 0, 1, 1}, 0, 1000), ValidationError);
}

TEST(PageRegion, UniformCentersFillCellsEvenly) {
  Rng rng(59);
  std::array<int, 9> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const int x = static_cast<int>(rng.uniform_int(0, kCoordMax));
    const int y = static_cast<int>(rng.uniform_int(0, kCoordMax));
    ++counts[static_cast<std::size_t>(page_region(BBox{x, y, x, y}, kCoordMax, kCoordMax))];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 9, 0.02);
}

}  // namespace
