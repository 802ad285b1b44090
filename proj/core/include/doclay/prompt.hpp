#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doclay/document.hpp"

namespace doclay {

inline constexpr std::size_t kDefaultMaxLength = 2560;

inline constexpr std::string_view kPatchPreamble = "Given the document patches:";
inline constexpr std::string_view kSegmentConnective =
    "and the document text contents and locations in the form of 'text, [left, top, right, bottom]':";

struct FixedText {
  std::string text;
};
struct SegmentText {
  std::size_t index = 0;
  std::string text;
};
struct BoxSlot {
  std::size_t index = 0;
  BBox box;
};
struct PatchSlot {
  std::size_t index = 0;
};
struct QuestionText {
  std::string text;
};

using PromptSlot = std::variant<FixedText, SegmentText, BoxSlot, PatchSlot, QuestionText>;
using PromptSlotSequence = std::vector<PromptSlot>;

// How OCR boxes enter the prompt: rendered as text (I) or as one embedded
// position per box (II).
enum class CoordMode { TextualCoords, EmbeddedCoords };

struct PatchGrid {
  int image_side = 224;
  int patch_side = 16;

  // Throws ValidationError unless both sides are positive and divisible.
  int patch_count() const;
};

int patch_count(int image_side, int patch_side);

// Slots in template order: preamble, M patches, connective, then for each
// segment in reading order its text followed by its box (as "[l, t, r, b]"
// text in mode I or a BoxSlot in mode II), then the question.
PromptSlotSequence assemble(const DocumentPage& page, std::string_view question, CoordMode mode,
                            const PatchGrid& grid = {});

using TokenCounter = std::function<std::size_t(std::string_view)>;

// Whitespace-delimited words with every ASCII punctuation character counted
// as its own token: "[100, 200]" -> "[", "100", ",", "200", "]".
std::size_t count_tokens(std::string_view text);

enum class SlotKind { FixedText, SegmentText, BoxSlot, PatchSlot, QuestionText };
enum class EmbeddingSource { Text, Visual, Layout };  // TE, VE+VP, LE+LP

std::string_view to_string(SlotKind k) noexcept;
std::string_view to_string(EmbeddingSource s) noexcept;

struct ShapeEntry {
  SlotKind kind;
  std::size_t tokens = 0;
  EmbeddingSource source;
};

struct FeatureSequenceShape {
  std::vector<ShapeEntry> entries;
  std::size_t total = 0;

  bool exceeds(std::size_t max_length) const noexcept { return total > max_length; }
};

FeatureSequenceShape sequence_shape(const PromptSlotSequence& seq, const TokenCounter& counter = count_tokens,
                                    std::size_t box_tokens_per_slot = 1, std::size_t patch_tokens_per_slot = 1);

// Drops trailing segments (text plus box) until the sequence fits; patches,
// fixed text and the question are never removed. Returns the number of
// segments dropped. Throws ValidationError when even zero segments overflow.
std::size_t truncate_to_fit(PromptSlotSequence& seq, std::size_t max_length,
                            const TokenCounter& counter = count_tokens, std::size_t box_tokens_per_slot = 1,
                            std::size_t patch_tokens_per_slot = 1);

struct PageLength {
  std::string page_id;
  std::size_t n_segments = 0;
  std::size_t ocr_tokens_textual = 0;   // mode I, segment texts plus rendered boxes
  std::size_t ocr_tokens_embedded = 0;  // mode II, segment texts plus box slots
  std::size_t total_textual = 0;        // full prompt including patches, fixed text, question
  std::size_t total_embedded = 0;
};

struct LengthReport {
  std::vector<PageLength> pages;
  double mean_textual = 0;
  double mean_embedded = 0;
  double ratio = 0;  // mean_textual / mean_embedded
  std::size_t patch_tokens = 0;
  std::size_t over_length_textual = 0;  // pages whose full mode-I prompt exceeds max_length
  std::size_t over_length_embedded = 0;
};

inline constexpr std::string_view kLengthQuestion = "What is the content of this document?";

PageLength measure_page(const DocumentPage& page, const TokenCounter& counter = count_tokens,
                        const PatchGrid& grid = {});

// Accumulates pages one at a time so corpora can be streamed.
class LengthAccumulator {
 public:
  explicit LengthAccumulator(const PatchGrid& grid = {}, std::size_t max_length = kDefaultMaxLength);
  void add(PageLength row);
  LengthReport finish() &&;

 private:
  LengthReport report_;
  std::size_t max_length_;
  double sum_textual_ = 0;
  double sum_embedded_ = 0;
};

LengthReport length_report(const std::vector<DocumentPage>& pages, const TokenCounter& counter = count_tokens,
                           const PatchGrid& grid = {}, std::size_t max_length = kDefaultMaxLength);

// "page_id,n_segments,len_mode_I,len_mode_II" rows plus a final "mean" row.
void write_length_csv(std::ostream& out, const LengthReport& report);

}  // namespace doclay
