#include "doclay/document.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

using nlohmann::json;

constexpr std::string_view kLayoutNames[] = {"Title", "Author", "Paragraph", "List", "Table",
                                             "Figure", "Caption", "Header", "Footer", "Other"};

[[noreturn]] void fail(const std::string& page_id, const std::string& path, const std::string& what) {
  throw ValidationError(page_id.empty() ? path : fmt::format("page '{}' {}", page_id, path), what);
}

const json& require(const json& obj, const char* key, const std::string& page_id, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(page_id, path.empty() ? std::string(key) : path + "." + key, "missing field");
  return *it;
}

double require_number(const json& v, const std::string& page_id, const std::string& path) {
  if (!v.is_number()) fail(page_id, path, "expected a number");
  return v.get<double>();
}

struct Scaler {
  double width;
  double height;
  bool normalized;
  double tolerance;
  std::string page_id;

  int scale(double raw, double dim, const std::string& path) const {
    if (!std::isfinite(raw)) fail(page_id, path, "non-finite coordinate");
    if (raw < 0) fail(page_id, path, fmt::format("negative coordinate {}", raw));
    if (normalized) {
      if (raw > kCoordMax || raw != std::floor(raw)) {
        fail(page_id, path, fmt::format("normalized coordinate {} not an integer in [0, {}]", raw, kCoordMax));
      }
      return static_cast<int>(raw);
    }
    if (raw > dim * (1.0 + tolerance)) {
      fail(page_id, path, fmt::format("coordinate {} outside page extent {}", raw, dim));
    }
    const double scaled = std::floor(raw * kCoordMax / dim);
    return static_cast<int>(std::clamp(scaled, 0.0, double(kCoordMax)));
  }

  BBox box(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 4) fail(page_id, path, "expected [left, top, right, bottom]");
    const char* names[] = {"left", "top", "right", "bottom"};
    double raw[4];
    for (int i = 0; i < 4; ++i) raw[i] = require_number(v[i], page_id, path + "." + names[i]);
    BBox b{scale(raw[0], width, path + ".left"), scale(raw[1], height, path + ".top"),
           scale(raw[2], width, path + ".right"), scale(raw[3], height, path + ".bottom")};
    if (raw[0] > raw[2]) fail(page_id, path + ".left", fmt::format("left {} > right {}", raw[0], raw[2]));
    if (raw[1] > raw[3]) fail(page_id, path + ".top", fmt::format("top {} > bottom {}", raw[1], raw[3]));
    return b;
  }
};

json box_json(const BBox& b) { return json::array({b.left, b.top, b.right, b.bottom}); }

}  // namespace

std::string_view to_string(LayoutType t) noexcept { return kLayoutNames[static_cast<int>(t)]; }

std::optional<LayoutType> parse_layout_type(std::string_view s) noexcept {
  for (std::size_t i = 0; i < std::size(kLayoutNames); ++i) {
    const std::string_view name = kLayoutNames[i];
    if (name.size() == s.size() &&
        std::equal(name.begin(), name.end(), s.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        })) {
      return static_cast<LayoutType>(i);
    }
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

const TextSegment& DocumentPage::segment(std::size_t i) const {
  if (i >= segments.size()) {
    throw RangeError(fmt::format("segment index {} out of range [0, {})", i, segments.size()));
  }
  return segments[i];
}

void validate(const DocumentPage& page) {
  const std::string& id = page.page_id;
  if (id.empty()) fail(id, "page_id", "empty page id");
  if (!(page.raw_width > 0)) fail(id, "width", "must be positive");
  if (!(page.raw_height > 0)) fail(id, "height", "must be positive");
  for (std::size_t i = 0; i < page.segments.size(); ++i) {
    const TextSegment& s = page.segments[i];
    const std::string path = fmt::format("segments[{}]", i);
    if (s.index != i) fail(id, path + ".index", fmt::format("index {} does not match position", s.index));
    if (trim(s.text).empty()) fail(id, path + ".text", "empty text");
    try {
      validate(s.bbox);
    } catch (const ValidationError& e) {
      fail(id, path + ".box." + e.where(), e.what());
    }
  }
  if (page.layout) {
    for (std::size_t i = 0; i < page.layout->size(); ++i) {
      try {
        validate((*page.layout)[i].bbox);
      } catch (const ValidationError& e) {
        fail(id, fmt::format("layout[{}].box.{}", i, e.where()), e.what());
      }
    }
  }
  if (page.table) {
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < page.table->cells.size(); ++i) {
      const TableCell& c = page.table->cells[i];
      const std::string path = fmt::format("table.cells[{}]", i);
      if (c.segment_index >= page.segments.size()) {
        fail(id, path + ".segment_index", fmt::format("no segment {}", c.segment_index));
      }
      if (c.row < 0 || c.col < 0) fail(id, path, "negative row or column");
      if (c.is_header && c.row != 0) fail(id, path + ".row", fmt::format("header cell in row {}", c.row));
      if (!seen.emplace(c.row, c.col).second) {
        fail(id, path, fmt::format("duplicate cell ({}, {})", c.row, c.col));
      }
    }
  }
}

DocumentPage ingest_page(const json& record, const IngestOptions& options) {
  if (!record.is_object()) throw ValidationError("", "page record is not a JSON object");
  DocumentPage page;
  {
    const json& id = require(record, "page_id", "", "");
    if (!id.is_string()) fail("", "page_id", "expected a string");
    page.page_id = id.get<std::string>();
  }
  const std::string& pid = page.page_id;
  page.raw_width = require_number(require(record, "width", pid, ""), pid, "width");
  page.raw_height = require_number(require(record, "height", pid, ""), pid, "height");
  if (!(page.raw_width > 0)) fail(pid, "width", fmt::format("non-positive dimension {}", page.raw_width));
  if (!(page.raw_height > 0)) fail(pid, "height", fmt::format("non-positive dimension {}", page.raw_height));

  const bool normalized = record.value("normalized", false);
  const Scaler scaler{page.raw_width, page.raw_height, normalized, options.clamp_tolerance, pid};

  const json& segs = require(record, "segments", pid, "");
  if (!segs.is_array()) fail(pid, "segments", "expected an array");
  page.segments.reserve(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string path = fmt::format("segments[{}]", i);
    const json& s = segs[i];
    if (!s.is_object()) fail(pid, path, "expected an object");
    const json& text = require(s, "text", pid, path);
    if (!text.is_string()) fail(pid, path + ".text", "expected a string");
    std::string t = trim(text.get<std::string>());
    if (t.empty()) fail(pid, path + ".text", "empty text");
    page.segments.push_back({i, std::move(t), scaler.box(require(s, "box", pid, path), path + ".box")});
  }

  if (auto it = record.find("layout"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) fail(pid, "layout", "expected an array");
    std::vector<LayoutAnnotation> layout;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = fmt::format("layout[{}]", i);
      const json& a = (*it)[i];
      if (!a.is_object()) fail(pid, path, "expected an object");
      const json& type = require(a, "type", pid, path);
      if (!type.is_string()) fail(pid, path + ".type", "expected a string");
      const std::string label = type.get<std::string>();
      auto parsed = parse_layout_type(label);
      if (!parsed && options.warnings) {
        options.warnings->push_back(
            fmt::format("page '{}' {}.type: unknown layout label '{}' mapped to Other", pid, path, label));
      }
      layout.push_back({scaler.box(require(a, "box", pid, path), path + ".box"), parsed.value_or(LayoutType::Other)});
    }
    page.layout = std::move(layout);
  }

  if (auto it = record.find("table"); it != record.end() && !it->is_null()) {
    if (!it->is_object()) fail(pid, "table", "expected an object");
    const json& cells = require(*it, "cells", pid, "table");
    if (!cells.is_array()) fail(pid, "table.cells", "expected an array");
    TableAnnotation table;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string path = fmt::format("table.cells[{}]", i);
      const json& c = cells[i];
      if (!c.is_object()) fail(pid, path, "expected an object");
      auto integer = [&](const char* key) {
        const json& v = require(c, key, pid, path);
        if (!v.is_number_integer()) fail(pid, path + "." + key, "expected an integer");
        return v.get<long long>();
      };
      const long long seg = integer("segment_index");
      if (seg < 0) fail(pid, path + ".segment_index", "negative index");
      table.cells.push_back({static_cast<std::size_t>(seg), static_cast<int>(integer("row")),
                             static_cast<int>(integer("col")), c.value("is_header", false)});
    }
    page.table = std::move(table);
  }

  if (auto it = record.find("image"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) fail(pid, "image", "expected a string");
    page.image = it->get<std::string>();
  }

  validate(page);
  return page;
}

DocumentPage ingest_page_line(std::string_view line, const IngestOptions& options) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError("", fmt::format("malformed JSON: {}", e.what()));
  }
  return ingest_page(record, options);
}

json page_to_json(const DocumentPage& page) {
  json out = json::object();
  out["page_id"] = page.page_id;
  out["width"] = page.raw_width;
  out["height"] = page.raw_height;
  out["normalized"] = true;
  json segs = json::array();
  for (const TextSegment& s : page.segments) segs.push_back({{"text", s.text}, {"box", box_json(s.bbox)}});
  out["segments"] = std::move(segs);
  if (page.layout) {
    json layout = json::array();
    for (const LayoutAnnotation& a : *page.layout) {
      layout.push_back({{"box", box_json(a.bbox)}, {"type", to_string(a.type)}});
    }
    out["layout"] = std::move(layout);
  }
  if (page.table) {
    json cells = json::array();
    for (const TableCell& c : page.table->cells) {
      cells.push_back({{"segment_index", c.segment_index}, {"row", c.row}, {"col", c.col}, {"is_header", c.is_header}});
    }
    out["table"] = {{"cells", std::move(cells)}};
  }
  if (page.image) out["image"] = *page.image;
  return out;
}

std::vector<TextSegment> reading_order_sort(std::vector<TextSegment> segments) {
  std::stable_sort(segments.begin(), segments.end(), [](const TextSegment& a, const TextSegment& b) {
    return std::pair(a.bbox.top, a.bbox.left) < std::pair(b.bbox.top, b.bbox.left);
  });
  for (std::size_t i = 0; i < segments.size(); ++i) segments[i].index = i;
  return segments;
}

DocumentPage sort_page_reading_order(DocumentPage page) {
  std::vector<TextSegment> sorted = page.segments;
  std::stable_sort(sorted.begin(), sorted.end(), [](const TextSegment& a, const TextSegment& b) {
    return std::pair(a.bbox.top, a.bbox.left) < std::pair(b.bbox.top, b.bbox.left);
  });
  std::vector<std::size_t> remap(page.segments.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    remap[sorted[i].index] = i;
    sorted[i].index = i;
  }
  page.segments = std::move(sorted);
  if (page.table) {
    for (TableCell& c : page.table->cells) c.segment_index = remap.at(c.segment_index);
  }
  return page;
}

}  // namespace doclay
