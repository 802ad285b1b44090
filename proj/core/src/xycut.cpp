#include "doclay/xycut.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

enum class Axis { Y, X };

Interval project(const BBox& b, Axis axis) {
  return axis == Axis::Y ? Interval{double(b.top), double(b.bottom)}
                         : Interval{double(b.left), double(b.right)};
}

// Splits `items` into groups separated by projection gaps >= min_gap, in
// ascending order along the axis. A single group means no qualifying gap.
std::vector<std::vector<IndexedBox>> split(const std::vector<IndexedBox>& items, Axis axis, double min_gap) {
  std::vector<IndexedBox> sorted = items;
  std::stable_sort(sorted.begin(), sorted.end(), [axis](const IndexedBox& a, const IndexedBox& b) {
    const Interval ia = project(a.box, axis);
    const Interval ib = project(b.box, axis);
    return ia.lo < ib.lo || (ia.lo == ib.lo && a.index < b.index);
  });

  std::vector<std::vector<IndexedBox>> groups;
  double run_hi = 0;
  for (const IndexedBox& item : sorted) {
    const Interval iv = project(item.box, axis);
    if (groups.empty() || iv.lo - run_hi >= min_gap) {
      groups.emplace_back();
      run_hi = iv.hi;
    } else {
      run_hi = std::max(run_hi, iv.hi);
    }
    groups.back().push_back(item);
  }
  return groups;
}

BlockNode make_node(const std::vector<IndexedBox>& items) {
  BlockNode node;
  std::vector<BBox> boxes;
  boxes.reserve(items.size());
  for (const IndexedBox& item : items) {
    node.members.push_back(item.index);
    boxes.push_back(item.box);
  }
  std::sort(node.members.begin(), node.members.end());
  node.bbox = union_box(boxes);
  return node;
}

BlockNode cut(const std::vector<IndexedBox>& items, Axis first, double min_gap) {
  BlockNode node = make_node(items);
  for (Axis axis : {first, first == Axis::Y ? Axis::X : Axis::Y}) {
    auto groups = split(items, axis, min_gap);
    if (groups.size() < 2) continue;
    node.cut_axis = axis == Axis::Y ? CutAxis::Horizontal : CutAxis::Vertical;
    const Axis next = axis == Axis::Y ? Axis::X : Axis::Y;
    node.children.reserve(groups.size());
    for (const auto& group : groups) node.children.push_back(cut(group, next, min_gap));
    return node;
  }
  return node;
}

void collect_leaves(const BlockNode& node, std::vector<const BlockNode*>& out) {
  if (node.children.empty()) {
    out.push_back(&node);
    return;
  }
  for (const BlockNode& child : node.children) collect_leaves(child, out);
}

std::vector<IndexedBox> boxes_of(const DocumentPage& page, const std::vector<std::size_t>& indices) {
  std::vector<IndexedBox> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back({i, page.segment(i).bbox});
  return out;
}

}  // namespace

std::string_view to_string(CutAxis a) noexcept {
  switch (a) {
    case CutAxis::Horizontal: return "horizontal";
    case CutAxis::Vertical: return "vertical";
    case CutAxis::Leaf: return "leaf";
  }
  return "leaf";
}

std::string_view to_string(StructureSource s) noexcept {
  return s == StructureSource::Annotated ? "annotated" : "recovered";
}

BlockNode xy_cut(const std::vector<IndexedBox>& segments, double min_gap) {
  if (segments.empty()) throw ValidationError("segments", "XY-Cut of an empty segment set");
  if (!(min_gap > 0)) throw ValidationError("min_gap", fmt::format("must be positive, got {}", min_gap));
  for (const IndexedBox& s : segments) validate(s.box);
  return cut(segments, Axis::Y, min_gap);
}

BlockNode xy_cut(const std::vector<TextSegment>& segments, double min_gap) {
  std::vector<IndexedBox> items;
  items.reserve(segments.size());
  for (const TextSegment& s : segments) items.push_back({s.index, s.bbox});
  return xy_cut(items, min_gap);
}

std::vector<const BlockNode*> leaves(const BlockNode& root) {
  std::vector<const BlockNode*> out;
  collect_leaves(root, out);
  return out;
}

HeaderDetection detect_headers(const DocumentPage& page, double min_gap) {
  if (page.segments.empty()) throw ValidationError("segments", "page has no segments");
  HeaderDetection result;
  auto by_left = [&page](std::size_t a, std::size_t b) {
    const BBox& ba = page.segment(a).bbox;
    const BBox& bb = page.segment(b).bbox;
    return ba.left < bb.left || (ba.left == bb.left && a < b);
  };

  if (page.table) {
    result.source = StructureSource::Annotated;
    for (const TableCell& c : page.table->cells) {
      (c.is_header ? result.headers : result.body).push_back(c.segment_index);
    }
    if (result.headers.empty()) throw ValidationError("table.cells", "annotated table has no header cells");
  } else {
    result.source = StructureSource::Recovered;
    const BlockNode root = xy_cut(page.segments, min_gap);
    if (root.cut_axis != CutAxis::Horizontal) {
      throw GenerationError(fmt::format("page '{}': no row structure recoverable (root cut is {})",
                                        page.page_id, to_string(root.cut_axis)));
    }
    result.headers = root.children.front().members;
    for (std::size_t r = 1; r < root.children.size(); ++r) {
      const auto& m = root.children[r].members;
      result.body.insert(result.body.end(), m.begin(), m.end());
    }
  }
  std::sort(result.headers.begin(), result.headers.end(), by_left);
  std::sort(result.body.begin(), result.body.end());
  return result;
}

TableModel assign_columns(const std::vector<IndexedBox>& headers,
                          const std::vector<IndexedBox>& body_cells,
                          double tolerance) {
  if (headers.empty()) throw ValidationError("headers", "no headers");
  if (!(tolerance >= 0)) throw ValidationError("tolerance", fmt::format("must be non-negative, got {}", tolerance));

  TableModel table;
  table.tolerance = tolerance;
  table.n_cols = headers.size();
  table.columns.resize(headers.size());
  for (const IndexedBox& h : headers) table.headers.push_back(h.index);

  std::vector<std::vector<IndexedBox>> cells(headers.size());
  for (const IndexedBox& cell : body_cells) {
    const double cx = center(cell.box).x;
    std::size_t best = 0;
    double best_delta = std::abs(cx - center(headers[0].box).x);
    for (std::size_t j = 1; j < headers.size(); ++j) {
      const double delta = std::abs(cx - center(headers[j].box).x);
      if (delta < best_delta) {
        best = j;
        best_delta = delta;
      }
    }
    const BBox& h = headers[best].box;
    const bool overlaps =
        interval_relation({double(cell.box.left), double(cell.box.right)}, {double(h.left), double(h.right)})
            .overlaps();
    if (best_delta <= tolerance || overlaps) {
      cells[best].push_back(cell);
    } else {
      table.unassigned.push_back(cell.index);
    }
  }

  for (std::size_t j = 0; j < cells.size(); ++j) {
    std::stable_sort(cells[j].begin(), cells[j].end(), [](const IndexedBox& a, const IndexedBox& b) {
      return std::tuple(a.box.top, a.box.left, a.index) < std::tuple(b.box.top, b.box.left, b.index);
    });
    for (const IndexedBox& c : cells[j]) table.columns[j].push_back(c.index);
    table.n_rows = std::max(table.n_rows, table.columns[j].size());
  }
  return table;
}

std::size_t cell_at(const TableModel& table, std::size_t row, std::size_t col) {
  if (col < 1 || col > table.n_cols) {
    throw RangeError(fmt::format("column {} outside [1, {}]", col, table.n_cols));
  }
  const auto& column = table.columns[col - 1];
  if (row < 1 || row > column.size()) {
    throw RangeError(fmt::format("row {} outside [1, {}] of column {}", row, column.size(), col));
  }
  return column[row - 1];
}

TableModel build_table(const DocumentPage& page, double min_gap, double tolerance, StructureSource* source) {
  const HeaderDetection detection = detect_headers(page, min_gap);
  if (source) *source = detection.source;
  return assign_columns(boxes_of(page, detection.headers), boxes_of(page, detection.body), tolerance);
}

}  // namespace doclay
