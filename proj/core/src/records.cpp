#include "doclay/records.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

using nlohmann::json;

constexpr std::string_view kTaskNames[] = {
    "DocumentDescription", "TextBoxReconstruction", "LayoutAnalysis", "TableAnalysis",
    "MaskedLanguage",      "MaskedPosition",        "GeometricAnalysis",
};

template <typename T>
T get_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(key, "missing field");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(key, e.what());
  }
}

TaskKind task_field(const json& j) {
  const auto name = get_field<std::string>(j, "task");
  auto task = parse_task(name);
  if (!task) throw ValidationError("task", fmt::format("unknown task '{}'", name));
  return *task;
}

}  // namespace

std::string_view to_string(TaskKind t) noexcept { return kTaskNames[static_cast<int>(t)]; }

std::optional<TaskKind> parse_task(std::string_view s) noexcept {
  for (std::size_t i = 0; i < std::size(kTaskNames); ++i) {
    if (kTaskNames[i] == s) return static_cast<TaskKind>(i);
  }
  return std::nullopt;
}

bool has_cot_family(TaskKind t) noexcept {
  return t == TaskKind::LayoutAnalysis || t == TaskKind::TableAnalysis || t == TaskKind::GeometricAnalysis;
}

std::string_view to_string(RenderMode m) noexcept { return m == RenderMode::WithCot ? "cot" : "direct"; }

std::optional<RenderMode> parse_render_mode(std::string_view s) noexcept {
  if (s == "cot") return RenderMode::WithCot;
  if (s == "direct") return RenderMode::DirectAnswer;
  return std::nullopt;
}

std::string render_steps(const std::vector<CotStep>& steps, std::string_view final_answer) {
  std::string out;
  for (const CotStep& s : steps) out += fmt::format("Step {}: {}\n", s.step_no, s.narration);
  out += kAnswerPrefix;
  out += final_answer;
  return out;
}

Rendered render(const InstructionRecord& record, RenderMode mode) {
  if (record.final_answer.empty()) throw ValidationError("final_answer", "empty final answer");
  if (mode == RenderMode::DirectAnswer) return {record.question, record.final_answer};
  if (!record.cot_steps || record.cot_steps->empty()) {
    throw ValidationError("cot_steps", fmt::format("record '{}' has no reasoning steps", record.record_id));
  }
  return {record.question, render_steps(*record.cot_steps, record.final_answer)};
}

RenderedExample make_example(const InstructionRecord& record, RenderMode mode) {
  Rendered r = render(record, mode);
  RenderedExample ex{record.record_id, record.page_id, record.task, mode,
                     std::move(r.question), std::move(r.response), record.metadata};
  if (mode == RenderMode::WithCot) {
    json steps = json::array();
    for (const CotStep& s : *record.cot_steps) steps.push_back(to_json(s));
    ex.metadata["cot_steps"] = std::move(steps);
  }
  return ex;
}

json to_json(const BoundValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BBox>) {
          return json::array({x.left, x.top, x.right, x.bottom});
        } else {
          return json(x);
        }
      },
      v);
}

BoundValue bound_value_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array() && j.size() == 4 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number_integer(); })) {
    return BBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  }
  throw ValidationError("bound_values", fmt::format("unsupported value {}", j.dump()));
}

json to_json(const CotStep& step) {
  json values = json::object();
  for (const auto& [k, v] : step.bound_values) values[k] = to_json(v);
  return {{"step_no", step.step_no}, {"narration", step.narration}, {"bound_values", std::move(values)}};
}

CotStep cot_step_from_json(const json& j) {
  CotStep s;
  s.step_no = get_field<int>(j, "step_no");
  s.narration = get_field<std::string>(j, "narration");
  const json values = get_field<json>(j, "bound_values");
  if (!values.is_object()) throw ValidationError("bound_values", "expected an object");
  for (const auto& [k, v] : values.items()) s.bound_values.emplace(k, bound_value_from_json(v));
  return s;
}

json to_json(const InstructionRecord& r) {
  json out = {{"record_id", r.record_id}, {"page_id", r.page_id}, {"task", to_string(r.task)},
              {"question", r.question}};
  if (r.cot_steps) {
    json steps = json::array();
    for (const CotStep& s : *r.cot_steps) steps.push_back(to_json(s));
    out["cot_steps"] = std::move(steps);
  }
  out["final_answer"] = r.final_answer;
  out["metadata"] = r.metadata;
  return out;
}

InstructionRecord record_from_json(const json& j) {
  InstructionRecord r;
  r.record_id = get_field<std::string>(j, "record_id");
  r.page_id = get_field<std::string>(j, "page_id");
  r.task = task_field(j);
  r.question = get_field<std::string>(j, "question");
  if (auto it = j.find("cot_steps"); it != j.end() && !it->is_null()) {
    std::vector<CotStep> steps;
    for (const json& s : *it) steps.push_back(cot_step_from_json(s));
    r.cot_steps = std::move(steps);
  }
  r.final_answer = get_field<std::string>(j, "final_answer");
  r.metadata = j.value("metadata", json::object());
  return r;
}

json to_json(const RenderedExample& e) {
  return {{"record_id", e.record_id}, {"page_id", e.page_id}, {"task", to_string(e.task)},
          {"mode", to_string(e.mode)}, {"question", e.question}, {"response", e.response},
          {"metadata", e.metadata}};
}

RenderedExample example_from_json(const json& j) {
  RenderedExample e;
  e.record_id = get_field<std::string>(j, "record_id");
  e.page_id = get_field<std::string>(j, "page_id");
  e.task = task_field(j);
  const auto mode = get_field<std::string>(j, "mode");
  auto parsed = parse_render_mode(mode);
  if (!parsed) throw ValidationError("mode", fmt::format("unknown mode '{}'", mode));
  e.mode = *parsed;
  e.question = get_field<std::string>(j, "question");
  e.response = get_field<std::string>(j, "response");
  e.metadata = j.value("metadata", json::object());
  if (!e.metadata.is_object()) throw ValidationError("metadata", "expected an object");
  return e;
}

std::string format_fixed2(double v) {
  std::string s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{}", v);
}

}  // namespace doclay
