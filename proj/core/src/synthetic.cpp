#include "doclay/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace doclay::synthetic {

namespace {

using nlohmann::json;

constexpr const char* kVocabulary[] = {
    "Invoice", "Total", "Amount", "Due", "Date", "Name", "Address", "Account", "Number", "Balance",
    "Payment", "Order", "Item", "Quantity", "Price", "Tax", "Subtotal", "Customer", "Report", "Summary",
    "Revenue", "Quarter", "Fiscal", "Year", "Market", "Share", "Growth", "Region", "North", "South",
    "the", "of", "and", "for", "with", "in", "to", "by", "on", "from",
    "2019", "2020", "2021", "12", "45", "100", "$12.50", "$1,250.00", "3.5%", "No.",
    "Company", "Limited", "Office", "Street", "Phone", "Email", "Page", "Section", "Table", "Notes",
};

std::string words(Rng& rng, int lo, int hi) {
  const auto n = rng.uniform_int(lo, hi);
  std::string out;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += word(rng);
  }
  return out;
}

int irand(Rng& rng, int lo, int hi) { return static_cast<int>(rng.uniform_int(lo, hi)); }

}  // namespace

std::string word(Rng& rng) {
  return kVocabulary[rng.uniform_int(0, static_cast<std::int64_t>(std::size(kVocabulary)) - 1)];
}

SyntheticTable table(Rng& rng, std::size_t body_rows, std::size_t cols, const std::string& page_id,
                     const TableOptions& options) {
  SyntheticTable out;
  out.page.page_id = page_id;
  const std::size_t rows = body_rows + 1;
  const double row_pitch = static_cast<double>(kCoordMax - 20) / static_cast<double>(rows);
  const double col_pitch = static_cast<double>(kCoordMax - 20) / static_cast<double>(cols);
  const int jitter = std::max(0, std::min<int>(static_cast<int>(options.tolerance / 3),
                                               static_cast<int>((col_pitch - options.min_gap) / 6) - 1));
  const int max_width = static_cast<int>(col_pitch - options.min_gap - 2.0 * jitter) - 2;
  const int cell_height = std::max(4, static_cast<int>((row_pitch - options.min_gap) / 2));

  TableAnnotation annotation;
  out.truth.assign(rows, std::vector<std::size_t>(cols));
  std::size_t index = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const int top = 10 + static_cast<int>(std::lround(static_cast<double>(r) * row_pitch));
    for (std::size_t c = 0; c < cols; ++c) {
      const double center_x = 10 + (static_cast<double>(c) + 0.5) * col_pitch + irand(rng, -jitter, jitter);
      const int width = irand(rng, std::max(4, max_width / 2), std::max(4, max_width));
      const int left = static_cast<int>(std::lround(center_x - width / 2.0));
      const int dy = irand(rng, 0, 2);
      const std::string text =
          r == 0 ? fmt::format("{} {}", word(rng), c + 1) : fmt::format("{} r{}c{}", word(rng), r, c + 1);
      out.page.segments.push_back({index, text, BBox{left, top + dy, left + width, top + dy + cell_height}});
      out.truth[r][c] = index;
      annotation.cells.push_back({index, static_cast<int>(r), static_cast<int>(c), r == 0});
      ++index;
    }
  }
  if (options.annotate) out.page.table = std::move(annotation);
  return out;
}

json raw_document(Rng& rng, const std::string& page_id) {
  // Lay the page out on the normalized grid, then express it in source units.
  const double width = irand(rng, 600, 2500);
  const double height = std::floor(width * 1.3);
  auto raw = [&](const BBox& b) {
    return json::array({b.left * width / kCoordMax, b.top * height / kCoordMax, b.right * width / kCoordMax,
                        b.bottom * height / kCoordMax});
  };

  json segments = json::array();
  json layout = json::array();
  json cells = json::array();
  auto add_segment = [&](const std::string& text, const BBox& b) {
    segments.push_back({{"text", text}, {"box", raw(b)}});
    return segments.size() - 1;
  };
  auto add_layout = [&](const BBox& b, const char* type) { layout.push_back({{"box", raw(b)}, {"type", type}}); };

  int y = irand(rng, 30, 60);
  {
    const int w = irand(rng, 300, 600);
    const BBox b{500 - w / 2, y, 500 + w / 2, y + 30};
    add_segment(words(rng, 2, 5), b);
    add_layout(b, "Title");
    y += 30 + irand(rng, 15, 30);
  }
  {
    const int w = irand(rng, 150, 300);
    const BBox b{500 - w / 2, y, 500 + w / 2, y + 16};
    add_segment(words(rng, 2, 3), b);
    add_layout(b, "Author");
    y += 16 + irand(rng, 25, 40);
  }

  const int paragraphs = irand(rng, 1, 3);
  for (int p = 0; p < paragraphs; ++p) {
    const int lines = irand(rng, 2, 5);
    const int top = y;
    int right = 0;
    for (int l = 0; l < lines; ++l) {
      const int r = irand(rng, 700, 920);
      right = std::max(right, r);
      add_segment(words(rng, 3, 8), BBox{80, y, r, y + 14});
      y += 14 + 6;
    }
    add_layout(BBox{80, top, right, y - 6}, "Paragraph");
    y += irand(rng, 20, 35);
  }

  {
    const int cols = irand(rng, 2, 4);
    const int body_rows = irand(rng, 2, 5);
    const int top = y;
    const double pitch = 840.0 / cols;
    for (int r = 0; r <= body_rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double cx = 80 + (c + 0.5) * pitch + irand(rng, -8, 8);
        const int w = irand(rng, 50, static_cast<int>(pitch) - 40);
        const BBox b{static_cast<int>(cx - w / 2.0), y, static_cast<int>(cx + w / 2.0), y + 14};
        const std::string text = r == 0 ? words(rng, 1, 2) : word(rng);
        const std::size_t idx = add_segment(text, b);
        cells.push_back({{"segment_index", idx}, {"row", r}, {"col", c}, {"is_header", r == 0}});
      }
      y += 14 + irand(rng, 12, 20);
    }
    add_layout(BBox{80, top, 920, y}, "Table");
    y += 20;
  }

  if (y < 940) {
    const BBox b{80, 955, 920, 970};
    add_segment(fmt::format("Page {}", irand(rng, 1, 40)), BBox{460, 955, 540, 970});
    add_layout(b, "Footer");
  }

  return {{"page_id", page_id}, {"width", width}, {"height", height}, {"segments", std::move(segments)},
          {"layout", std::move(layout)}, {"table", {{"cells", std::move(cells)}}},
          {"image", fmt::format("images/{}.png", page_id)}};
}

DocumentPage text_page(Rng& rng, const std::string& page_id, std::size_t n_segments) {
  DocumentPage page;
  page.page_id = page_id;
  const double pitch = static_cast<double>(kCoordMax - 20) / static_cast<double>(std::max<std::size_t>(n_segments, 1));
  for (std::size_t i = 0; i < n_segments; ++i) {
    const int top = 10 + static_cast<int>(std::floor(static_cast<double>(i) * pitch));
    const int left = irand(rng, 20, 200);
    const int right = irand(rng, left + 50, 980);
    const int h = std::max(1, static_cast<int>(pitch * 0.6));
    page.segments.push_back({i, words(rng, 1, 5), BBox{left, top, right, std::min(kCoordMax, top + h)}});
  }
  return page;
}

std::vector<json> corpus(std::uint64_t seed, std::size_t pages, const std::string& prefix) {
  std::vector<json> out;
  out.reserve(pages);
  for (std::size_t i = 0; i < pages; ++i) {
    const std::string id = fmt::format("{}-{:06}", prefix, i);
    Rng rng(substream_seed(seed, id));
    if (i % 5 == 4) {
      const auto rows = static_cast<std::size_t>(rng.uniform_int(2, 6));
      const auto cols = static_cast<std::size_t>(rng.uniform_int(2, 5));
      json page = page_to_json(table(rng, rows, cols, id).page);
      page.erase("normalized");  // normalized coordinates on a 1000 x 1000 source page
      out.push_back(std::move(page));
    } else {
      out.push_back(raw_document(rng, id));
    }
  }
  return out;
}

}  // namespace doclay::synthetic
