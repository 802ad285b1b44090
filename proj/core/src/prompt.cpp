#include "doclay/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_ocr_slot(const ShapeEntry& e) noexcept {
  return e.kind == SlotKind::SegmentText || e.kind == SlotKind::BoxSlot;
}

}  // namespace

int patch_count(int image_side, int patch_side) {
  if (image_side <= 0) throw ValidationError("image_side", fmt::format("must be positive, got {}", image_side));
  if (patch_side <= 0) throw ValidationError("patch_side", fmt::format("must be positive, got {}", patch_side));
  if (image_side % patch_side != 0) {
    throw ValidationError("patch_side", fmt::format("{} does not divide image side {}", patch_side, image_side));
  }
  const int per_side = image_side / patch_side;
  return per_side * per_side;
}

int PatchGrid::patch_count() const { return doclay::patch_count(image_side, patch_side); }

PromptSlotSequence assemble(const DocumentPage& page, std::string_view question, CoordMode mode,
                            const PatchGrid& grid) {
  if (trim(question).empty()) throw ValidationError("question", "empty question");
  const int m = grid.patch_count();

  std::vector<const TextSegment*> ordered;
  ordered.reserve(page.segments.size());
  for (const TextSegment& s : page.segments) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const TextSegment* a, const TextSegment* b) { return a->index < b->index; });

  PromptSlotSequence seq;
  seq.reserve(static_cast<std::size_t>(m) + 2 * ordered.size() + 3);
  seq.push_back(FixedText{std::string(kPatchPreamble)});
  for (int i = 0; i < m; ++i) seq.push_back(PatchSlot{static_cast<std::size_t>(i)});
  seq.push_back(FixedText{std::string(kSegmentConnective)});
  for (const TextSegment* s : ordered) {
    seq.push_back(SegmentText{s->index, s->text});
    if (mode == CoordMode::TextualCoords) {
      seq.push_back(FixedText{format_box(s->bbox)});
    } else {
      seq.push_back(BoxSlot{s->index, s->bbox});
    }
  }
  seq.push_back(QuestionText{std::string(question)});
  return seq;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (std::ispunct(c)) {
      ++n;
      in_word = false;
    } else if (!in_word) {
      ++n;
      in_word = true;
    }
  }
  return n;
}

std::string_view to_string(SlotKind k) noexcept {
  switch (k) {
    case SlotKind::FixedText: return "fixed_text";
    case SlotKind::SegmentText: return "segment_text";
    case SlotKind::BoxSlot: return "box";
    case SlotKind::PatchSlot: return "patch";
    case SlotKind::QuestionText: return "question";
  }
  return "";
}

std::string_view to_string(EmbeddingSource s) noexcept {
  switch (s) {
    case EmbeddingSource::Text: return "TE";
    case EmbeddingSource::Visual: return "VE+VP";
    case EmbeddingSource::Layout: return "LE+LP";
  }
  return "";
}

FeatureSequenceShape sequence_shape(const PromptSlotSequence& seq, const TokenCounter& counter,
                                    std::size_t box_tokens_per_slot, std::size_t patch_tokens_per_slot) {
  if (box_tokens_per_slot == 0) throw ValidationError("box_tokens_per_slot", "must be positive");
  if (patch_tokens_per_slot == 0) throw ValidationError("patch_tokens_per_slot", "must be positive");
  FeatureSequenceShape shape;
  shape.entries.reserve(seq.size());
  for (const PromptSlot& slot : seq) {
    shape.entries.push_back(std::visit(
        overloaded{
            [&](const FixedText& s) { return ShapeEntry{SlotKind::FixedText, counter(s.text), EmbeddingSource::Text}; },
            [&](const SegmentText& s) {
              return ShapeEntry{SlotKind::SegmentText, counter(s.text), EmbeddingSource::Text};
            },
            [&](const BoxSlot&) { return ShapeEntry{SlotKind::BoxSlot, box_tokens_per_slot, EmbeddingSource::Layout}; },
            [&](const PatchSlot&) {
              return ShapeEntry{SlotKind::PatchSlot, patch_tokens_per_slot, EmbeddingSource::Visual};
            },
            [&](const QuestionText& s) {
              return ShapeEntry{SlotKind::QuestionText, counter(s.text), EmbeddingSource::Text};
            },
        },
        slot));
    shape.total += shape.entries.back().tokens;
  }
  return shape;
}

std::size_t truncate_to_fit(PromptSlotSequence& seq, std::size_t max_length, const TokenCounter& counter,
                            std::size_t box_tokens_per_slot, std::size_t patch_tokens_per_slot) {
  const FeatureSequenceShape shape = sequence_shape(seq, counter, box_tokens_per_slot, patch_tokens_per_slot);
  std::size_t total = shape.total;
  if (total <= max_length) return 0;

  // Segment i occupies a SegmentText slot and the box slot right after it.
  std::size_t end = seq.size();
  while (end > 0 && std::holds_alternative<QuestionText>(seq[end - 1])) {
    --end;
  }
  std::size_t dropped = 0;
  std::size_t pos = end;
  while (total > max_length && pos >= 2 && std::holds_alternative<SegmentText>(seq[pos - 2])) {
    total -= shape.entries[pos - 2].tokens + shape.entries[pos - 1].tokens;
    pos -= 2;
    ++dropped;
  }
  if (total > max_length) {
    throw ValidationError("max_length", fmt::format("{} tokens remain after dropping every segment; limit {}",
                                                    total, max_length));
  }
  seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(pos), seq.begin() + static_cast<std::ptrdiff_t>(end));
  return dropped;
}

PageLength measure_page(const DocumentPage& page, const TokenCounter& counter, const PatchGrid& grid) {
  PageLength row{page.page_id, page.segments.size()};
  for (CoordMode mode : {CoordMode::TextualCoords, CoordMode::EmbeddedCoords}) {
    const auto shape = sequence_shape(assemble(page, kLengthQuestion, mode, grid), counter);
    std::size_t ocr = 0;
    // In mode I the rendered box is the FixedText right after each segment.
    for (std::size_t i = 0; i < shape.entries.size(); ++i) {
      const ShapeEntry& e = shape.entries[i];
      if (is_ocr_slot(e)) {
        ocr += e.tokens;
      } else if (mode == CoordMode::TextualCoords && e.kind == SlotKind::FixedText && i > 0 &&
                 shape.entries[i - 1].kind == SlotKind::SegmentText) {
        ocr += e.tokens;
      }
    }
    if (mode == CoordMode::TextualCoords) {
      row.ocr_tokens_textual = ocr;
      row.total_textual = shape.total;
    } else {
      row.ocr_tokens_embedded = ocr;
      row.total_embedded = shape.total;
    }
  }
  return row;
}

LengthAccumulator::LengthAccumulator(const PatchGrid& grid, std::size_t max_length) : max_length_(max_length) {
  report_.patch_tokens = static_cast<std::size_t>(grid.patch_count());
}

void LengthAccumulator::add(PageLength row) {
  sum_textual_ += static_cast<double>(row.ocr_tokens_textual);
  sum_embedded_ += static_cast<double>(row.ocr_tokens_embedded);
  report_.over_length_textual += row.total_textual > max_length_;
  report_.over_length_embedded += row.total_embedded > max_length_;
  report_.pages.push_back(std::move(row));
}

LengthReport LengthAccumulator::finish() && {
  if (!report_.pages.empty()) {
    const auto n = static_cast<double>(report_.pages.size());
    report_.mean_textual = sum_textual_ / n;
    report_.mean_embedded = sum_embedded_ / n;
    report_.ratio = report_.mean_embedded > 0 ? report_.mean_textual / report_.mean_embedded : 0.0;
  }
  return std::move(report_);
}

LengthReport length_report(const std::vector<DocumentPage>& pages, const TokenCounter& counter,
                           const PatchGrid& grid, std::size_t max_length) {
  LengthAccumulator acc(grid, max_length);
  for (const DocumentPage& page : pages) acc.add(measure_page(page, counter, grid));
  return std::move(acc).finish();
}

void write_length_csv(std::ostream& out, const LengthReport& report) {
  out << "page_id,n_segments,len_mode_I,len_mode_II\n";
  double mean_n = 0;
  for (const PageLength& p : report.pages) {
    std::string id = p.page_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : id) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      id = quoted + "\"";
    }
    fmt::print(out, "{},{},{},{}\n", id, p.n_segments, p.ocr_tokens_textual, p.ocr_tokens_embedded);
    mean_n += static_cast<double>(p.n_segments);
  }
  if (!report.pages.empty()) mean_n /= static_cast<double>(report.pages.size());
  fmt::print(out, "mean,{:.2f},{:.2f},{:.2f}\n", mean_n, report.mean_textual, report.mean_embedded);
}

}  // namespace doclay
