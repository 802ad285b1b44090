#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "doclay/geometry.hpp"

namespace doclay {

struct TextSegment {
  std::size_t index = 0;  // reading-order position, 0-based
  std::string text;
  BBox bbox;

  friend bool operator==(const TextSegment&, const TextSegment&) = default;
};

enum class LayoutType { Title, Author, Paragraph, List, Table, Figure, Caption, Header, Footer, Other };

std::string_view to_string(LayoutType t) noexcept;
// Case-insensitive; unknown labels yield nullopt (callers map them to Other).
std::optional<LayoutType> parse_layout_type(std::string_view s) noexcept;

struct LayoutAnnotation {
  BBox bbox;
  LayoutType type = LayoutType::Other;
  friend bool operator==(const LayoutAnnotation&, const LayoutAnnotation&) = default;
};

struct TableCell {
  std::size_t segment_index = 0;
  int row = 0;  // 0-based; the header row is row 0
  int col = 0;
  bool is_header = false;
  friend bool operator==(const TableCell&, const TableCell&) = default;
};

struct TableAnnotation {
  std::vector<TableCell> cells;
  friend bool operator==(const TableAnnotation&, const TableAnnotation&) = default;
};

struct DocumentPage {
  std::string page_id;
  double raw_width = kCoordMax;
  double raw_height = kCoordMax;
  std::vector<TextSegment> segments;
  std::optional<std::vector<LayoutAnnotation>> layout;
  std::optional<TableAnnotation> table;
  std::optional<std::string> image;

  std::size_t size() const noexcept { return segments.size(); }
  const TextSegment& segment(std::size_t i) const;

  friend bool operator==(const DocumentPage&, const DocumentPage&) = default;
};

// Checks every page invariant; throws ValidationError with a field path.
void validate(const DocumentPage& page);

struct IngestOptions {
  // Raw coordinates may exceed the page extent by this fraction of the page
  // dimension before they are rejected; within it they are clamped.
  double clamp_tolerance = 0.01;
  // Receives non-fatal diagnostics such as unknown layout labels.
  std::vector<std::string>* warnings = nullptr;
};

// Ingests one OCR record. Raw coordinates are scaled by
// floor(raw * 1000 / dim) and clamped to [0, 1000]. Records carrying
// "normalized": true are taken as already scaled (this is how pages emitted
// by page_to_json round-trip).
DocumentPage ingest_page(const nlohmann::json& record, const IngestOptions& options = {});
DocumentPage ingest_page_line(std::string_view line, const IngestOptions& options = {});

// Normalized representation, re-ingestable by ingest_page.
nlohmann::json page_to_json(const DocumentPage& page);

// Stable sort by (top, left); indices are reassigned to the new order.
std::vector<TextSegment> reading_order_sort(std::vector<TextSegment> segments);

// reading_order_sort applied to a page, with table cell references remapped.
DocumentPage sort_page_reading_order(DocumentPage page);

// Whitespace-trimmed copy.
std::string trim(std::string_view s);

}  // namespace doclay
