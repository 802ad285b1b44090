#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "doclay/document.hpp"
#include "doclay/error.hpp"
#include "doclay/rng.hpp"
#include "doclay/synthetic.hpp"

using namespace doclay;
using nlohmann::json;

namespace {

json raw_page() {
  return json::parse(R"({
    "page_id": "p1", "width": 2000, "height": 500,
    "segments": [
      {"text": "  Title  ", "box": [100, 10, 900, 40]},
      {"text": "body", "box": [0, 100, 2000, 500]}
    ],
    "layout": [{"box": [100, 10, 900, 40], "type": "title"}, {"box": [0, 90, 2000, 500], "type": "Sidebar"}],
    "table": {"cells": [{"segment_index": 0, "row": 0, "col": 0, "is_header": true},
                        {"segment_index": 1, "row": 1, "col": 0}]},
    "image": "p1.png"
  })");
}

std::string where_of(const json& record) {
  try {
    ingest_page(record);
  } catch (const ValidationError& e) {
    return e.where();
  }
  return "<accepted>";
}

TEST(Ingest, ScalesByFloorOfRawOverDimension) {
  std::vector<std::string> warnings;
  IngestOptions opts;
  opts.warnings = &warnings;
  const DocumentPage page = ingest_page(raw_page(), opts);
  ASSERT_EQ(page.size(), 2u);
  // floor(100 * 1000 / 2000) = 50, floor(10 * 1000 / 500) = 20, ...
  EXPECT_EQ(page.segments[0].bbox, (BBox{50, 20, 450, 80}));
  EXPECT_EQ(page.segments[1].bbox, (BBox{0, 200, 1000, 1000}));
  EXPECT_EQ(page.segments[0].text, "Title");
  EXPECT_EQ(page.segments[1].index, 1u);
  ASSERT_TRUE(page.layout);
  EXPECT_EQ((*page.layout)[0].type, LayoutType::Title);
  EXPECT_EQ((*page.layout)[1].type, LayoutType::Other);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("Sidebar"), std::string::npos);
  ASSERT_TRUE(page.table);
  EXPECT_TRUE(page.table->cells[0].is_header);
  EXPECT_EQ(page.image, "p1.png");
}

TEST(Ingest, ScalingMatchesIntegerArithmetic) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const int dim = static_cast<int>(rng.uniform_int(100, 5000));
    const int a = static_cast<int>(rng.uniform_int(0, dim));
    const int b = static_cast<int>(rng.uniform_int(a, dim));
    json rec = {{"page_id", "x"},
                {"width", dim},
                {"height", dim},
                {"segments", json::array({{{"text", "t"}, {"box", {a, a, b, b}}}})}};
    const BBox got = ingest_page(rec).segments[0].bbox;
    // Exact integer floor division as the reference.
    const int sa = static_cast<int>(static_cast<long long>(a) * 1000 / dim);
    const int sb = static_cast<int>(static_cast<long long>(b) * 1000 / dim);
    ASSERT_EQ(got, (BBox{sa, sa, sb, sb})) << a << " " << b << " / " << dim;
  }
}

TEST(Ingest, SmallOverhangIsClamped) {
  json rec = raw_page();
  rec["segments"][1]["box"] = {0, 100, 2010, 504};  // within 1%
  EXPECT_EQ(ingest_page(rec).segments[1].bbox, (BBox{0, 200, 1000, 1000}));
}

TEST(Ingest, RejectionsNameTheField) {
  json neg = raw_page();
  neg["segments"][0]["box"][0] = -1;
  EXPECT_EQ(where_of(neg), "page 'p1' segments[0].box.left");

  json far = raw_page();
  far["segments"][1]["box"][3] = 600;
  EXPECT_EQ(where_of(far), "page 'p1' segments[1].box.bottom");

  json inverted = raw_page();
  inverted["segments"][0]["box"] = {900, 10, 100, 40};
  EXPECT_EQ(where_of(inverted), "page 'p1' segments[0].box.left");

  json empty_text = raw_page();
  empty_text["segments"][1]["text"] = "   ";
  EXPECT_EQ(where_of(empty_text), "page 'p1' segments[1].text");

  json no_width = raw_page();
  no_width.erase("width");
  EXPECT_EQ(where_of(no_width), "page 'p1' width");

  json zero_height = raw_page();
  zero_height["height"] = 0;
  EXPECT_EQ(where_of(zero_height), "page 'p1' height");

  json bad_cell = raw_page();
  bad_cell["table"]["cells"][1]["segment_index"] = 7;
  EXPECT_EQ(where_of(bad_cell), "page 'p1' table.cells[1].segment_index");

  json header_below = raw_page();
  header_below["table"]["cells"][1]["is_header"] = true;
  EXPECT_EQ(where_of(header_below), "page 'p1' table.cells[1].row");

  json duplicate = raw_page();
  duplicate["table"]["cells"][1]["row"] = 0;
  EXPECT_EQ(where_of(duplicate), "page 'p1' table.cells[1]");

  EXPECT_EQ(where_of(json::array()), "");
}

TEST(Ingest, MalformedLineIsAValidationError) {
  EXPECT_THROW(ingest_page_line("{\"page_id\": "), ValidationError);
}

TEST(Ingest, EmptyPageIsAllowed) {
  const DocumentPage page = ingest_page(json{{"page_id", "e"}, {"width", 10}, {"height", 10}, {"segments", json::array()}});
  EXPECT_EQ(page.size(), 0u);
  EXPECT_THROW(page.segment(0), RangeError);
}

TEST(Ingest, NormalizedRecordsRoundTrip) {
  const DocumentPage page = ingest_page(raw_page());
  const json once = page_to_json(page);
  EXPECT_TRUE(once.at("normalized").get<bool>());
  const DocumentPage again = ingest_page(once);
  EXPECT_EQ(again, page);
  EXPECT_EQ(page_to_json(again), once);

  json fractional = once;
  fractional["segments"][0]["box"][0] = 10.5;
  EXPECT_THROW(ingest_page(fractional), ValidationError);
}

TEST(Ingest, SyntheticCorpusIsIdempotent) {
  for (const json& raw : synthetic::corpus(5, 40)) {
    const DocumentPage page = ingest_page(raw);
    ASSERT_EQ(ingest_page(page_to_json(page)), page) << page.page_id;
  }
}

TEST(LayoutType, CaseInsensitiveParse) {
  EXPECT_EQ(parse_layout_type("PARAGRAPH"), LayoutType::Paragraph);
  EXPECT_EQ(parse_layout_type("caption"), LayoutType::Caption);
  EXPECT_FALSE(parse_layout_type("Paragraphs").has_value());
  EXPECT_EQ(to_string(LayoutType::Footer), "Footer");
}

TEST(Validate, IndexMustMatchPosition) {
  DocumentPage page = ingest_page(raw_page());
  page.segments[1].index = 5;
  try {
    validate(page);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.where(), "page 'p1' segments[1].index");
  }
}

TEST(ReadingOrder, SortsByTopThenLeftStably) {
  std::vector<TextSegment> segs{
      {0, "c", {500, 100, 600, 120}},
      {1, "a", {10, 10, 50, 30}},
      {2, "b", {100, 100, 200, 120}},
      {3, "d", {500, 100, 520, 110}},  // same (top, left) as "c": keeps input order
  };
  const auto sorted = reading_order_sort(segs);
  ASSERT_EQ(sorted.size(), 4u);
  EXPECT_EQ(sorted[0].text, "a");
  EXPECT_EQ(sorted[1].text, "b");
  EXPECT_EQ(sorted[2].text, "c");
  EXPECT_EQ(sorted[3].text, "d");
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i].index, i);
}

TEST(ReadingOrder, PageSortRemapsTableCells) {
  DocumentPage page;
  page.page_id = "t";
  page.segments = {{0, "value", {10, 200, 50, 220}}, {1, "Header", {10, 100, 50, 120}}};
  page.table = TableAnnotation{{{1, 0, 0, true}, {0, 1, 0, false}}};
  const DocumentPage sorted = sort_page_reading_order(page);
  EXPECT_EQ(sorted.segments[0].text, "Header");
  EXPECT_EQ(sorted.table->cells[0].segment_index, 0u);
  EXPECT_EQ(sorted.table->cells[1].segment_index, 1u);
  EXPECT_NO_THROW(validate(sorted));
}

TEST(Trim, Whitespace) {
  EXPECT_EQ(trim("\t a b \n"), "a b");
  EXPECT_EQ(trim("   "), "");
}

}  // namespace
