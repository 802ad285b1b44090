#include "doclay/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "doclay/cot.hpp"
#include "doclay/error.hpp"
#include "doclay/xycut.hpp"

namespace doclay {

namespace {

using nlohmann::json;
using StepValues = std::vector<BoundValues>;

bool reals_match(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

bool values_match(const BoundValue& a, const BoundValue& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) return reals_match(*x, std::get<double>(b));
  return a == b;
}

std::string describe(const BoundValue& v) { return to_json(v).dump(); }

BBox box_param(const json& params, const char* key) {
  const json& j = params.at(key);
  if (!j.is_array() || j.size() != 4) throw ValidationError(key, "expected a box");
  BBox b{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  validate(b);
  return b;
}

struct Expected {
  std::string answer;
  StepValues steps;  // empty for tasks without reasoning steps
};

Expected expect_geometric(const DocumentPage& page, const json& params) {
  const auto ia = params.at("idx_a").get<std::size_t>();
  const auto ib = params.at("idx_b").get<std::size_t>();
  const auto query = params.at("query").get<std::string>();
  if (ia == ib) throw ValidationError("params.idx_b", "identical indices");
  const TextSegment& a = page.segment(ia);
  const TextSegment& b = page.segment(ib);

  BoundValues names{{"text_a", a.text}, {"text_b", b.text}};
  if (a.text == b.text) {
    names["ordinal_a"] = static_cast<std::int64_t>(ia + 1);
    names["ordinal_b"] = static_cast<std::int64_t>(ib + 1);
  }
  const SpanRelation h = interval_relation({double(a.bbox.left), double(a.bbox.right)},
                                           {double(b.bbox.left), double(b.bbox.right)});
  const SpanRelation v = interval_relation({double(a.bbox.top), double(a.bbox.bottom)},
                                           {double(b.bbox.top), double(b.bbox.bottom)});

  Expected e;
  BoundValues s1 = names;
  s1["box_a"] = a.bbox;
  s1["box_b"] = b.bbox;

  BoundValues s2{{"box_a", a.bbox},
                 {"box_b", b.bbox},
                 {"horizontal_relation", std::string(to_string(h.kind))},
                 {"horizontal_amount", h.amount},
                 {"vertical_relation", std::string(to_string(v.kind))},
                 {"vertical_amount", v.amount}};

  const Direction dir = relative_direction(a.bbox, b.bbox);
  BoundValues s3 = names;
  s3["center_a_x"] = (a.bbox.left + a.bbox.right) / 2.0;
  s3["center_a_y"] = (a.bbox.top + a.bbox.bottom) / 2.0;
  s3["center_b_x"] = (b.bbox.left + b.bbox.right) / 2.0;
  s3["center_b_y"] = (b.bbox.top + b.bbox.bottom) / 2.0;
  s3["direction"] = std::string(to_string(dir));

  BoundValues s4;
  double distance = 0;
  if (h.overlaps() && v.overlaps()) {
    s4["distance_case"] = std::string("overlap");
  } else if (v.overlaps()) {
    s4["distance_case"] = std::string("horizontal-gap");
    s4["horizontal_gap"] = h.amount;
    distance = h.amount;
  } else if (h.overlaps()) {
    s4["distance_case"] = std::string("vertical-gap");
    s4["vertical_gap"] = v.amount;
    distance = v.amount;
  } else {
    s4["distance_case"] = std::string("corner");
    s4["horizontal_gap"] = h.amount;
    s4["vertical_gap"] = v.amount;
    distance = std::sqrt(h.amount * h.amount + v.amount * v.amount);
  }
  s4["distance"] = distance;

  e.steps = {s1, s2, s3, s4};
  if (query == "distance") {
    e.answer = format_fixed2(distance);
  } else if (query == "direction") {
    e.answer = std::string(to_string(dir));
  } else {
    throw ValidationError("params.query", fmt::format("unknown query '{}'", query));
  }
  return e;
}

Expected expect_layout(const DocumentPage& page, const json& params) {
  if (!page.layout || page.layout->empty()) throw ValidationError("layout", "page has no layout annotations");
  const auto& layout = *page.layout;
  const BBox area = box_param(params, "target_area");
  const auto k = params.at("k_neighbors").get<std::size_t>();

  std::size_t answer = layout.size();
  long best = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const long w = std::min(area.right, layout[i].bbox.right) - std::max(area.left, layout[i].bbox.left);
    const long hgt = std::min(area.bottom, layout[i].bbox.bottom) - std::max(area.top, layout[i].bbox.top);
    const long overlap = (w > 0 && hgt > 0) ? w * hgt : 0;
    if (overlap > best) {
      best = overlap;
      answer = i;
    }
  }
  if (answer == layout.size()) throw ValidationError("params.target_area", "intersects no layout element");

  Expected e;
  BoundValues s1{{"area", area}, {"region", std::string(to_string(page_region(area, kCoordMax, kCoordMax)))}};
  std::size_t t = 0;
  for (const TextSegment& seg : page.segments) {
    const double cx = (seg.bbox.left + seg.bbox.right) / 2.0;
    const double cy = (seg.bbox.top + seg.bbox.bottom) / 2.0;
    if (cx >= area.left && cx <= area.right && cy >= area.top && cy <= area.bottom) {
      s1[fmt::format("text_{}", ++t)] = seg.text;
    }
  }

  // Rank the other elements by distance, ties to the lower index.
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i != answer) ranked.emplace_back(min_distance(area, layout[i].bbox), i);
  }
  std::sort(ranked.begin(), ranked.end());
  BoundValues s2;
  for (std::size_t n = 0; n < std::min(k, ranked.size()); ++n) {
    const std::string key = fmt::format("neighbor_{}", n + 1);
    const LayoutAnnotation& a = layout[ranked[n].second];
    s2[key + "_type"] = std::string(to_string(a.type));
    s2[key + "_box"] = a.bbox;
    s2[key + "_distance"] = ranked[n].first;
  }

  e.answer = std::string(to_string(layout[answer].type));
  e.steps = {s1, s2, {{"layout_type", e.answer}}};
  return e;
}

Expected expect_table(const DocumentPage& page, const InstructionRecord& record) {
  const json& params = record.metadata.at("params");
  const auto row = params.at("row").get<std::size_t>();
  const auto col = params.at("col").get<std::size_t>();
  const json& thresholds = record.metadata.at("thresholds");
  StructureSource source{};
  const TableModel table = build_table(page, thresholds.at("min_gap").get<double>(),
                                       thresholds.at("column_tolerance").get<double>(), &source);
  if (record.metadata.value("structure", "") != to_string(source)) {
    throw ValidationError("metadata.structure", fmt::format("recorded '{}' but page yields '{}'",
                                                            record.metadata.value("structure", ""), to_string(source)));
  }
  const std::size_t target = cell_at(table, row, col);

  const auto column = static_cast<std::int64_t>(col);
  BoundValues s1{{"column", column}}, s2{{"column", column}};
  for (std::size_t j = 0; j < table.headers.size(); ++j) {
    const TextSegment& h = page.segment(table.headers[j]);
    s1[fmt::format("header_{}_text", j + 1)] = h.text;
    s1[fmt::format("header_{}_box", j + 1)] = h.bbox;
  }
  for (std::size_t i = 0; i < table.columns[col - 1].size(); ++i) {
    const TextSegment& c = page.segment(table.columns[col - 1][i]);
    s2[fmt::format("cell_{}_text", i + 1)] = c.text;
    s2[fmt::format("cell_{}_box", i + 1)] = c.bbox;
  }
  Expected e;
  e.answer = page.segment(target).text;
  e.steps = {s1, s2, {{"row", static_cast<std::int64_t>(row)}, {"column", column}, {"answer", e.answer}}};
  return e;
}

Expected expect_text_boxes(const DocumentPage& page, const json& params) {
  const auto indices = params.at("indices").get<std::vector<std::size_t>>();
  if (indices.empty()) throw ValidationError("params.indices", "no sampled segments");
  std::vector<std::string> lines;
  for (std::size_t i : indices) {
    const TextSegment& s = page.segment(i);
    const auto same = std::count_if(page.segments.begin(), page.segments.end(),
                                    [&](const TextSegment& o) { return o.text == s.text; });
    if (same != 1) throw ValidationError("params.indices", fmt::format("text of segment {} is not unique", i));
    lines.push_back(fmt::format("{}, [{}, {}, {}, {}]", s.text, s.bbox.left, s.bbox.top, s.bbox.right, s.bbox.bottom));
  }
  Expected e;
  for (std::size_t i = 0; i < lines.size(); ++i) e.answer += (i ? "\n" : "") + lines[i];
  return e;
}

void compare_steps(const InstructionRecord& record, const StepValues& expected, std::vector<Violation>& out) {
  const auto& steps = *record.cot_steps;
  if (steps.size() != expected.size()) {
    out.push_back({record.record_id, std::nullopt,
                   fmt::format("expected {} steps, found {}", expected.size(), steps.size())});
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const CotStep& step = steps[i];
    const int no = static_cast<int>(i + 1);
    if (step.step_no != no) {
      out.push_back({record.record_id, no, fmt::format("step numbered {}", step.step_no)});
    }
    for (const std::string& n : unbound_numbers(step.narration, step.bound_values)) {
      out.push_back({record.record_id, no, fmt::format("narration value {} is not a bound value", n)});
    }
    if (i >= expected.size()) continue;
    const BoundValues& want = expected[i];
    try {
      if (step.narration != narrate_step(record.task, no, want)) {
        out.push_back({record.record_id, no, "narration does not match the recomputed step"});
      }
    } catch (const ValidationError& e) {
      out.push_back({record.record_id, no, fmt::format("cannot narrate recomputed step: {}", e.what())});
    }
    for (const auto& [key, value] : step.bound_values) {
      auto it = want.find(key);
      if (it == want.end()) {
        out.push_back({record.record_id, no, fmt::format("unexpected bound value '{}'", key)});
      } else if (!values_match(value, it->second)) {
        out.push_back({record.record_id, no,
                       fmt::format("bound value '{}' is {} but recomputes to {}", key, describe(value),
                                   describe(it->second))});
      }
    }
    for (const auto& [key, value] : want) {
      if (!step.bound_values.count(key)) {
        out.push_back({record.record_id, no, fmt::format("missing bound value '{}'", key)});
      }
    }
  }
}

}  // namespace

std::string format_violation(const Violation& v) {
  return v.step ? fmt::format("{}: step {}: {}", v.record_id, *v.step, v.message)
                : fmt::format("{}: {}", v.record_id, v.message);
}

std::vector<std::string> unbound_numbers(const std::string& narration, const BoundValues& values) {
  std::string text = narration;
  std::vector<double> numbers;
  for (const auto& [key, v] : values) {
    if (const auto* s = std::get_if<std::string>(&v)) {
      const std::string quoted = "\"" + *s + "\"";
      for (std::size_t pos; (pos = text.find(quoted)) != std::string::npos;) text.replace(pos, quoted.size(), " ");
    } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
      numbers.push_back(static_cast<double>(*i));
    } else if (const auto* d = std::get_if<double>(&v)) {
      numbers.push_back(*d);
    } else if (const auto* b = std::get_if<BBox>(&v)) {
      numbers.insert(numbers.end(), {double(b->left), double(b->top), double(b->right), double(b->bottom)});
    }
  }

  std::vector<std::string> unbound;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  for (std::size_t i = 0; i < text.size();) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_digit(text[j])) ++j;
    if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
      ++j;
      while (j < text.size() && is_digit(text[j])) ++j;
    }
    const std::string token = text.substr(i, j - i);
    i = j;
    const std::size_t dot = token.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(token.size() - dot - 1);
    const bool bound = std::any_of(numbers.begin(), numbers.end(), [&](double x) {
      if (decimals == 0) return x == std::floor(x) && fmt::format("{}", static_cast<long long>(x)) == token;
      return fmt::format("{:.{}f}", x, decimals) == token || format_number(x) == token;
    });
    if (!bound) unbound.push_back(token);
  }
  return unbound;
}

std::vector<Violation> verify_record(const InstructionRecord& record, const DocumentPage& page) {
  std::vector<Violation> out;
  const std::string& id = record.record_id;
  if (record.final_answer.empty()) out.push_back({id, std::nullopt, "empty final answer"});
  if (record.question.empty()) out.push_back({id, std::nullopt, "empty question"});
  if (record.page_id != page.page_id) {
    out.push_back({id, std::nullopt, fmt::format("page id '{}' does not match source '{}'", record.page_id, page.page_id)});
  }
  if (record.cot_steps && !has_cot_family(record.task)) {
    out.push_back({id, std::nullopt, fmt::format("task {} does not carry reasoning steps", to_string(record.task))});
  }

  try {
    const json params = record.metadata.value("params", json::object());
    Expected e;
    switch (record.task) {
      case TaskKind::DocumentDescription:
        e.answer = describe_document(page);
        break;
      case TaskKind::TextBoxReconstruction:
        e = expect_text_boxes(page, params);
        break;
      case TaskKind::LayoutAnalysis:
        e = expect_layout(page, params);
        break;
      case TaskKind::TableAnalysis:
        e = expect_table(page, record);
        break;
      case TaskKind::GeometricAnalysis:
        e = expect_geometric(page, params);
        break;
      case TaskKind::MaskedLanguage: {
        const std::string restored = apply_masked_language_answer(record.question, record.final_answer);
        if (restored != page_text(page)) out.push_back({id, std::nullopt, "answer does not restore the page text"});
        return out;
      }
      case TaskKind::MaskedPosition: {
        const std::string restored = apply_masked_position_answer(record.question, record.final_answer);
        if (restored != page_listing(page)) out.push_back({id, std::nullopt, "answer does not restore the page boxes"});
        return out;
      }
    }
    if (record.final_answer != e.answer) {
      out.push_back({id, std::nullopt,
                     fmt::format("final answer '{}' but recomputes to '{}'", record.final_answer, e.answer)});
    }
    if (record.cot_steps) compare_steps(record, e.steps, out);
  } catch (const std::exception& ex) {
    out.push_back({id, std::nullopt, fmt::format("cannot recompute: {}", ex.what())});
  }
  return out;
}

std::vector<Violation> verify_example(const RenderedExample& example, const DocumentPage* page) {
  std::vector<Violation> out;
  const std::string& id = example.record_id;
  if (!page) {
    out.push_back({id, std::nullopt, "source page not found"});
    return out;
  }
  if (example.response.empty()) {
    out.push_back({id, std::nullopt, "empty response"});
    return out;
  }

  InstructionRecord record{example.record_id, example.page_id, example.task, example.question,
                           std::nullopt, {}, example.metadata};
  record.metadata.erase("cot_steps");

  if (example.mode == RenderMode::DirectAnswer) {
    if (example.metadata.contains("cot_steps")) out.push_back({id, std::nullopt, "direct record carries steps"});
    record.final_answer = example.response;
  } else {
    if (!has_cot_family(example.task)) {
      out.push_back({id, std::nullopt, fmt::format("task {} has no cot rendering", to_string(example.task))});
      return out;
    }
    std::vector<CotStep> steps;
    try {
      for (const json& s : example.metadata.at("cot_steps")) steps.push_back(cot_step_from_json(s));
    } catch (const std::exception& ex) {
      out.push_back({id, std::nullopt, fmt::format("unreadable cot_steps: {}", ex.what())});
      return out;
    }
    if (steps.empty()) {
      out.push_back({id, std::nullopt, "cot record has no steps"});
      return out;
    }
    // Response must be exactly the rendering of the recorded steps.
    const std::string& resp = example.response;
    std::size_t start = 0;
    for (const CotStep& s : steps) {
      const std::size_t nl = resp.find('\n', start);
      const std::string line = resp.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
      if (line != fmt::format("Step {}: {}", s.step_no, s.narration)) {
        out.push_back({id, s.step_no, "response text differs from the recorded step"});
      }
      if (nl == std::string::npos) {
        start = resp.size();
        break;
      }
      start = nl + 1;
    }
    const std::string tail = resp.substr(std::min(start, resp.size()));
    if (tail.rfind(kAnswerPrefix, 0) != 0 || tail.find('\n') != std::string::npos) {
      out.push_back({id, std::nullopt, "response does not end with a single answer line"});
      record.final_answer = tail;
    } else {
      record.final_answer = tail.substr(kAnswerPrefix.size());
    }
    record.cot_steps = std::move(steps);
  }

  auto more = verify_record(record, *page);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace doclay
