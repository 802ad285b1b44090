#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doclay/document.hpp"
#include "doclay/records.hpp"

namespace doclay {

struct Violation {
  std::string record_id;
  std::optional<int> step;  // 1-based step number when the violation is step-local
  std::string message;
};

std::string format_violation(const Violation& v);

// Re-derives every answer and bound value of `record` from the source page
// using the geometry and table operations directly:
//   - bound values must match exactly (integers, boxes, labels, texts) or to
//     1e-9 relative (reals), with no missing or extra symbols;
//   - every number in a narration must be one of the step's bound values;
//   - the final answer must equal the recomputed answer (or, for the masking
//     tasks, reconstruct the page exactly).
std::vector<Violation> verify_record(const InstructionRecord& record, const DocumentPage& page);

// verify_record on a serialized example plus the envelope checks: schema,
// response format for the mode, and agreement between the response text and
// the recorded steps. A null page yields "source page not found".
std::vector<Violation> verify_example(const RenderedExample& example, const DocumentPage* page);

// Numbers appearing in `narration` that match none of `values`. Quoted
// occurrences of string values are ignored.
std::vector<std::string> unbound_numbers(const std::string& narration, const BoundValues& values);

}  // namespace doclay
