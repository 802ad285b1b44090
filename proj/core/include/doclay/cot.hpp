#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "doclay/document.hpp"
#include "doclay/records.hpp"
#include "doclay/rng.hpp"
#include "doclay/xycut.hpp"

namespace doclay {

inline constexpr std::string_view kGeneratorVersion = "doclay-cot/1";
inline constexpr double kDefaultMaskRate = 0.15;
inline constexpr double kMaxMaskRate = 0.5;
inline constexpr std::size_t kDefaultNeighbors = 3;

enum class GeometricQuery { Distance, Direction };
std::string_view to_string(GeometricQuery q) noexcept;

struct GeneratorOptions {
  double min_gap = kDefaultMinGap;
  double column_tolerance = kDefaultColumnTolerance;
  double mask_rate = kDefaultMaskRate;
  std::size_t k_neighbors = kDefaultNeighbors;
  std::size_t sample_k = 5;  // texts per box-reconstruction question
};

// Every generator throws GenerationError (or ValidationError / RangeError for
// precondition violations) when the page cannot support the task; empty pages
// are always rejected.

InstructionRecord gen_document_description(const DocumentPage& page, Rng& rng);

InstructionRecord gen_text_box_reconstruction(const DocumentPage& page, Rng& rng, std::size_t sample_k);

InstructionRecord gen_layout_analysis(const DocumentPage& page, const BBox& target_area, Rng& rng,
                                      std::size_t k_neighbors = kDefaultNeighbors);

// row and col are 1-based; the header row is not counted.
InstructionRecord gen_table_analysis(const DocumentPage& page, std::size_t row, std::size_t col, Rng& rng,
                                     double min_gap = kDefaultMinGap,
                                     double column_tolerance = kDefaultColumnTolerance);

InstructionRecord gen_masked_language(const DocumentPage& page, Rng& rng, double mask_rate = kDefaultMaskRate);

InstructionRecord gen_masked_position(const DocumentPage& page, Rng& rng, double mask_rate = kDefaultMaskRate);

InstructionRecord gen_geometric_analysis(const DocumentPage& page, std::size_t idx_a, std::size_t idx_b,
                                         GeometricQuery query, Rng& rng);

// Narration of one reasoning step, a pure function of the step's bound
// values. Throws ValidationError when a value the sentence needs is missing
// or of the wrong kind, or when the task has no such step.
std::string narrate_step(TaskKind task, int step_no, const BoundValues& values);

// Chooses task parameters (targets, indices, table cells) from `rng` and
// runs the matching generator.
InstructionRecord generate_task(const DocumentPage& page, TaskKind task, Rng& rng,
                                const GeneratorOptions& options = {});

// Deterministic overview used as the DocumentDescription answer.
std::string describe_document(const DocumentPage& page);

// Page text as the masked-language task sees it: each segment's words joined
// by single spaces, segments joined by newlines.
std::string page_text(const DocumentPage& page);

// Listing used by the masked-position task: one "text, [l, t, r, b]" line per
// segment in reading order.
std::string page_listing(const DocumentPage& page);

// The body of a masking question (everything after its first line).
std::string question_body(std::string_view question);

// Substitute the answer of a masked-language record back into its question
// body. Throws ValidationError on malformed answers or missing sentinels.
std::string apply_masked_language_answer(std::string_view question, std::string_view answer);

// Same for masked-position records: each "[BOX?]" in the question body is
// replaced, in order, by the box on the corresponding answer line.
std::string apply_masked_position_answer(std::string_view question, std::string_view answer);

inline constexpr std::string_view kBoxPlaceholder = "[BOX?]";

}  // namespace doclay
