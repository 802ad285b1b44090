#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "doclay/document.hpp"
#include "doclay/geometry.hpp"

namespace doclay {

// Horizontal cuts split along y into rows; vertical cuts split along x.
enum class CutAxis { Horizontal, Vertical, Leaf };

std::string_view to_string(CutAxis a) noexcept;

struct BlockNode {
  BBox bbox;                          // tight union of member boxes
  std::vector<std::size_t> members;   // segment indices, ascending
  CutAxis cut_axis = CutAxis::Leaf;
  std::vector<BlockNode> children;    // ordered along the cut axis

  friend bool operator==(const BlockNode&, const BlockNode&) = default;
};

inline constexpr double kDefaultMinGap = 10.0;
inline constexpr double kDefaultColumnTolerance = 50.0;

// Recursive XY-Cut. The root tries the y projection first, each child tries
// the axis not cut by its parent first, and a node becomes a Leaf only when
// neither projection has a whitespace gap >= min_gap.
BlockNode xy_cut(const std::vector<IndexedBox>& segments, double min_gap = kDefaultMinGap);
BlockNode xy_cut(const std::vector<TextSegment>& segments, double min_gap = kDefaultMinGap);

// Leaves in tree order.
std::vector<const BlockNode*> leaves(const BlockNode& root);

enum class StructureSource { Annotated, Recovered };
std::string_view to_string(StructureSource s) noexcept;

struct HeaderDetection {
  std::vector<std::size_t> headers;  // left to right
  std::vector<std::size_t> body;     // remaining table cells, ascending index
  StructureSource source = StructureSource::Recovered;
};

// Header cells of the page's table. With a table annotation the annotated
// headers are used; otherwise the topmost row of the XY-Cut of all segments.
HeaderDetection detect_headers(const DocumentPage& page, double min_gap = kDefaultMinGap);

struct TableModel {
  std::vector<std::size_t> headers;               // left to right
  std::vector<std::vector<std::size_t>> columns;  // top to bottom within each column
  std::vector<std::size_t> unassigned;            // body cells matching no header
  std::size_t n_rows = 0;                         // longest column
  std::size_t n_cols = 0;
  double tolerance = kDefaultColumnTolerance;
};

// Each body cell joins the header whose center-x is nearest (ties to the
// leftmost), provided the center-x offset is within `tolerance` or the x
// intervals overlap; otherwise it is reported as unassigned.
TableModel assign_columns(const std::vector<IndexedBox>& headers,
                          const std::vector<IndexedBox>& body_cells,
                          double tolerance = kDefaultColumnTolerance);

// Segment index of the row-th body cell (1-based, header excluded) in the
// col-th column (1-based).
std::size_t cell_at(const TableModel& table, std::size_t row, std::size_t col);

// detect_headers followed by assign_columns on the page's boxes.
TableModel build_table(const DocumentPage& page,
                       double min_gap = kDefaultMinGap,
                       double tolerance = kDefaultColumnTolerance,
                       StructureSource* source = nullptr);

}  // namespace doclay
