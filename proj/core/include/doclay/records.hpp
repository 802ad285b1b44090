#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "doclay/geometry.hpp"

namespace doclay {

enum class TaskKind {
  DocumentDescription,
  TextBoxReconstruction,
  LayoutAnalysis,
  TableAnalysis,
  MaskedLanguage,
  MaskedPosition,
  GeometricAnalysis,
};

inline constexpr TaskKind kAllTasks[] = {
    TaskKind::DocumentDescription, TaskKind::TextBoxReconstruction, TaskKind::LayoutAnalysis,
    TaskKind::TableAnalysis,       TaskKind::MaskedLanguage,        TaskKind::MaskedPosition,
    TaskKind::GeometricAnalysis,
};

std::string_view to_string(TaskKind t) noexcept;
std::optional<TaskKind> parse_task(std::string_view s) noexcept;

// True for the three task families whose records carry reasoning steps.
bool has_cot_family(TaskKind t) noexcept;

// Integers, reals, boxes and labels/texts referenced by a step narration.
using BoundValue = std::variant<std::int64_t, double, BBox, std::string>;
using BoundValues = std::map<std::string, BoundValue>;

struct CotStep {
  int step_no = 0;
  std::string narration;
  BoundValues bound_values;

  friend bool operator==(const CotStep&, const CotStep&) = default;
};

struct InstructionRecord {
  std::string record_id;
  std::string page_id;
  TaskKind task = TaskKind::DocumentDescription;
  std::string question;
  std::optional<std::vector<CotStep>> cot_steps;
  std::string final_answer;
  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const InstructionRecord&, const InstructionRecord&) = default;
};

enum class RenderMode { WithCot, DirectAnswer };
std::string_view to_string(RenderMode m) noexcept;  // "cot" / "direct"
std::optional<RenderMode> parse_render_mode(std::string_view s) noexcept;

struct Rendered {
  std::string question;
  std::string response;
};

// WithCot: "Step n: <narration>" lines followed by "Answer: <final_answer>".
// DirectAnswer: the final answer alone.
Rendered render(const InstructionRecord& record, RenderMode mode);
std::string render_steps(const std::vector<CotStep>& steps, std::string_view final_answer);

inline constexpr std::string_view kAnswerPrefix = "Answer: ";

// Serialized training example; one JSONL line each.
struct RenderedExample {
  std::string record_id;
  std::string page_id;
  TaskKind task = TaskKind::DocumentDescription;
  RenderMode mode = RenderMode::DirectAnswer;
  std::string question;
  std::string response;
  nlohmann::json metadata = nlohmann::json::object();
};

// For WithCot the steps (with bound values) are stored under
// metadata["cot_steps"] so they can be re-verified at rest.
RenderedExample make_example(const InstructionRecord& record, RenderMode mode);

nlohmann::json to_json(const BoundValue& v);
BoundValue bound_value_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CotStep& step);
CotStep cot_step_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InstructionRecord& record);
InstructionRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RenderedExample& example);
RenderedExample example_from_json(const nlohmann::json& j);

// Fixed-precision rendering used for distances in answers.
std::string format_fixed2(double v);
// Shortest form: integers without a fractional part, halves as "x.5".
std::string format_number(double v);

}  // namespace doclay
