#include "doclay/cot.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

using nlohmann::json;

std::string quote(std::string_view text) { return fmt::format("\"{}\"", text); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// "a", "a and b", "a, b and c"
std::string join_and(const std::vector<std::string>& parts) {
  if (parts.size() <= 1) return join(parts, "");
  std::vector<std::string> head(parts.begin(), parts.end() - 1);
  return join(head, ", ") + " and " + parts.back();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string pick(Rng& rng, std::initializer_list<std::string_view> bank) {
  const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(bank.size()) - 1));
  return std::string(*(bank.begin() + i));
}

json box_json(const BBox& b) { return json::array({b.left, b.top, b.right, b.bottom}); }

InstructionRecord base_record(const DocumentPage& page, TaskKind task, const Rng& rng) {
  InstructionRecord r;
  r.record_id = fmt::format("{}:{}", page.page_id, to_string(task));
  r.page_id = page.page_id;
  r.task = task;
  r.metadata = {{"generator_version", kGeneratorVersion}, {"seed", rng.seed()}, {"params", json::object()}};
  return r;
}

void require_segments(const DocumentPage& page, std::size_t n, std::string_view task) {
  if (page.segments.size() < n) {
    throw GenerationError(fmt::format("page '{}': {} needs at least {} segment(s), page has {}",
                                      page.page_id, task, n, page.segments.size()));
  }
}

void check_mask_rate(double rate) {
  if (!(rate > 0 && rate <= kMaxMaskRate)) {
    throw ValidationError("mask_rate", fmt::format("{} outside (0, {}]", rate, kMaxMaskRate));
  }
}

std::vector<std::string> split_words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = s.find('\n', start);
    lines.push_back(s.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::string_view to_string(GeometricQuery q) noexcept {
  return q == GeometricQuery::Distance ? "distance" : "direction";
}

std::string page_text(const DocumentPage& page) {
  std::vector<std::string> lines;
  for (const TextSegment& s : page.segments) lines.push_back(join(split_words(s.text), " "));
  return join(lines, "\n");
}

std::string page_listing(const DocumentPage& page) {
  std::vector<std::string> lines;
  for (const TextSegment& s : page.segments) lines.push_back(s.text + ", " + format_box(s.bbox));
  return join(lines, "\n");
}

std::string question_body(std::string_view question) {
  const std::size_t nl = question.find('\n');
  return nl == std::string_view::npos ? std::string() : std::string(question.substr(nl + 1));
}

std::string describe_document(const DocumentPage& page) {
  if (page.segments.empty()) throw GenerationError(fmt::format("page '{}' is empty", page.page_id));
  std::string out = fmt::format("The document contains {} text segment{}.", page.segments.size(),
                                page.segments.size() == 1 ? "" : "s");

  if (page.layout && !page.layout->empty()) {
    std::map<LayoutType, int> counts;
    for (const LayoutAnnotation& a : *page.layout) ++counts[a.type];
    std::vector<std::string> parts;
    for (const auto& [type, n] : counts) {
      const std::string name = lower(to_string(type));
      if (n == 1) {
        const bool vowel = std::string_view("aeiou").find(name.front()) != std::string_view::npos;
        parts.push_back(fmt::format("{} {} region", vowel ? "an" : "a", name));
      } else {
        parts.push_back(fmt::format("{} {} regions", n, name));
      }
    }
    out += fmt::format(" It has {}.", join_and(parts));
  }

  std::set<PageRegion> occupied;
  for (const TextSegment& s : page.segments) occupied.insert(page_region(s.bbox, kCoordMax, kCoordMax));
  std::vector<std::string> names;
  for (PageRegion r : occupied) names.emplace_back(to_string(r));
  out += fmt::format(" Text appears in the {} part{} of the page.", join_and(names), names.size() == 1 ? "" : "s");
  return out;
}

namespace {

std::string text_at(const BoundValues& v, const std::string& key) { return std::get<std::string>(v.at(key)); }
BBox box_at(const BoundValues& v, const std::string& key) { return std::get<BBox>(v.at(key)); }
double real_at(const BoundValues& v, const std::string& key) { return std::get<double>(v.at(key)); }
std::int64_t int_at(const BoundValues& v, const std::string& key) { return std::get<std::int64_t>(v.at(key)); }

// Quoted text, with its 1-based position when the step disambiguates it.
std::string segment_name(const BoundValues& v, char which) {
  std::string name = quote(text_at(v, fmt::format("text_{}", which)));
  const std::string ordinal = fmt::format("ordinal_{}", which);
  if (v.count(ordinal)) name += fmt::format(" (#{})", int_at(v, ordinal));
  return name;
}

std::string narrate_layout(int step, const BoundValues& v) {
  switch (step) {
    case 1: {
      std::vector<std::string> texts;
      for (std::size_t i = 1; v.count(fmt::format("text_{}", i)); ++i) texts.push_back(quote(text_at(v, fmt::format("text_{}", i))));
      const std::string area = format_box(box_at(v, "area"));
      const std::string region = text_at(v, "region");
      return texts.empty()
                 ? fmt::format("The area {} contains no text and lies in the {} part of the document.", area, region)
                 : fmt::format("The area {} contains the text {} and lies in the {} part of the document.", area,
                               join(texts, ", "), region);
    }
    case 2: {
      std::vector<std::string> parts;
      for (std::size_t n = 1; v.count(fmt::format("neighbor_{}_type", n)); ++n) {
        const std::string key = fmt::format("neighbor_{}", n);
        parts.push_back(fmt::format("{} at {} (distance {})", text_at(v, key + "_type"),
                                    format_box(box_at(v, key + "_box")), format_fixed2(real_at(v, key + "_distance"))));
      }
      return parts.empty() ? "There are no other layout elements on the page."
                           : fmt::format("The nearest layout elements are {}.", join(parts, "; "));
    }
    case 3:
      return fmt::format("Given its region and the neighboring elements, the layout type of the area is {}.",
                         text_at(v, "layout_type"));
  }
  throw ValidationError("step", fmt::format("layout analysis has no step {}", step));
}

std::string narrate_table(int step, const BoundValues& v) {
  const std::int64_t col = int_at(v, "column");
  switch (step) {
    case 1: {
      std::vector<std::string> parts;
      for (std::size_t j = 1; v.count(fmt::format("header_{}_text", j)); ++j) {
        parts.push_back(fmt::format("{} at {}", quote(text_at(v, fmt::format("header_{}_text", j))),
                                    format_box(box_at(v, fmt::format("header_{}_box", j)))));
      }
      return fmt::format("The table headers from left to right are {}. The header of column {} is {}.",
                         join(parts, ", "), col, quote(text_at(v, fmt::format("header_{}_text", col))));
    }
    case 2: {
      std::vector<std::string> parts;
      for (std::size_t i = 1; v.count(fmt::format("cell_{}_text", i)); ++i) {
        parts.push_back(fmt::format("{} at {}", quote(text_at(v, fmt::format("cell_{}_text", i))),
                                    format_box(box_at(v, fmt::format("cell_{}_box", i)))));
      }
      return fmt::format("Cells of one column sit under its header, so column {} holds from top to bottom: {}.", col,
                         join(parts, ", "));
    }
    case 3:
      return fmt::format("Element {} of column {} is {}.", int_at(v, "row"), col, quote(text_at(v, "answer")));
  }
  throw ValidationError("step", fmt::format("table analysis has no step {}", step));
}

std::string span_phrase(const BoundValues& v, const std::string& axis) {
  const double amount = real_at(v, axis + "_amount");
  return text_at(v, axis + "_relation") == to_string(SpanKind::Overlap)
             ? fmt::format("overlap by {}", format_number(amount))
             : fmt::format("are separated by a gap of {}", format_number(amount));
}

std::string narrate_geometric(int step, const BoundValues& v) {
  switch (step) {
    case 1:
      return fmt::format("The box of {} is {} and the box of {} is {}.", segment_name(v, 'a'),
                         format_box(box_at(v, "box_a")), segment_name(v, 'b'), format_box(box_at(v, "box_b")));
    case 2: {
      const BBox a = box_at(v, "box_a");
      const BBox b = box_at(v, "box_b");
      return fmt::format(
          "The horizontal projections [{}, {}] and [{}, {}] {}; the vertical projections [{}, {}] and [{}, {}] {}.",
          a.left, a.right, b.left, b.right, span_phrase(v, "horizontal"), a.top, a.bottom, b.top, b.bottom,
          span_phrase(v, "vertical"));
    }
    case 3: {
      const std::string a = segment_name(v, 'a');
      const std::string b = segment_name(v, 'b');
      const std::string centers =
          fmt::format("The center of {} is ({}, {}) and the center of {} is ({}, {})", a,
                      format_number(real_at(v, "center_a_x")), format_number(real_at(v, "center_a_y")), b,
                      format_number(real_at(v, "center_b_x")), format_number(real_at(v, "center_b_y")));
      const std::string dir = text_at(v, "direction");
      if (dir == to_string(Direction::Coincident)) return centers + ", so the centers are coincident.";
      return fmt::format("{}, so {} lies {} of {}.", centers, b, dir, a);
    }
    case 4: {
      const std::string d = format_fixed2(real_at(v, "distance"));
      const auto dcase = parse_distance_case(text_at(v, "distance_case"));
      if (!dcase) throw ValidationError("distance_case", "unknown case");
      switch (*dcase) {
        case DistanceCase::Overlap:
          return fmt::format("Both projections overlap, so the boxes overlap and the minimum distance is {}.", d);
        case DistanceCase::HorizontalGap:
          return fmt::format(
              "Only the vertical projections overlap, so the minimum distance is the horizontal gap {}: {}.",
              format_number(real_at(v, "horizontal_gap")), d);
        case DistanceCase::VerticalGap:
          return fmt::format(
              "Only the horizontal projections overlap, so the minimum distance is the vertical gap {}: {}.",
              format_number(real_at(v, "vertical_gap")), d);
        case DistanceCase::Corner:
          return fmt::format(
              "Neither projection overlaps, so the minimum distance is between the nearest corners: "
              "the square root of ({} squared plus {} squared) = {}.",
              format_number(real_at(v, "horizontal_gap")), format_number(real_at(v, "vertical_gap")), d);
      }
    }
  }
  throw ValidationError("step", fmt::format("geometric analysis has no step {}", step));
}

CotStep make_step(TaskKind task, int step_no, BoundValues values) {
  CotStep s{step_no, {}, std::move(values)};
  s.narration = narrate_step(task, step_no, s.bound_values);
  return s;
}

}  // namespace

std::string narrate_step(TaskKind task, int step_no, const BoundValues& values) {
  try {
    switch (task) {
      case TaskKind::LayoutAnalysis: return narrate_layout(step_no, values);
      case TaskKind::TableAnalysis: return narrate_table(step_no, values);
      case TaskKind::GeometricAnalysis: return narrate_geometric(step_no, values);
      default: break;
    }
  } catch (const std::bad_variant_access&) {
    throw ValidationError("bound_values", fmt::format("step {} holds a value of the wrong kind", step_no));
  } catch (const std::out_of_range&) {
    throw ValidationError("bound_values", fmt::format("step {} lacks a value its narration needs", step_no));
  }
  throw ValidationError("task", fmt::format("task {} has no reasoning steps", to_string(task)));
}

InstructionRecord gen_document_description(const DocumentPage& page, Rng& rng) {
  require_segments(page, 1, "document description");
  InstructionRecord r = base_record(page, TaskKind::DocumentDescription, rng);
  r.question = pick(rng, {"Give a short overview of this document.", "Summarize the structure of the document.",
                          "Describe the document briefly."});
  r.final_answer = describe_document(page);
  return r;
}

InstructionRecord gen_text_box_reconstruction(const DocumentPage& page, Rng& rng, std::size_t sample_k) {
  require_segments(page, 1, "text box reconstruction");
  if (sample_k < 1 || sample_k > page.segments.size()) {
    throw ValidationError("sample_k", fmt::format("{} outside [1, {}]", sample_k, page.segments.size()));
  }
  // Only texts that occur once on the page identify a single box.
  std::map<std::string, int> freq;
  for (const TextSegment& s : page.segments) ++freq[s.text];
  std::vector<std::size_t> pool;
  for (const TextSegment& s : page.segments) {
    if (freq[s.text] == 1) pool.push_back(s.index);
  }
  if (pool.empty()) {
    throw GenerationError(fmt::format("page '{}': every text occurs more than once; boxes are ambiguous",
                                      page.page_id));
  }
  const std::size_t k = std::min(sample_k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());

  InstructionRecord r = base_record(page, TaskKind::TextBoxReconstruction, rng);
  std::vector<std::string> texts, answers;
  for (std::size_t i : chosen) {
    const TextSegment& s = page.segment(i);
    texts.push_back(s.text);
    answers.push_back(s.text + ", " + format_box(s.bbox));
  }
  r.question = pick(rng, {"Recover the bounding box of each of the following texts:",
                          "Give the coordinates of the box around each text below:",
                          "Where is each of these texts located? Answer with their boxes:"}) +
               "\n" + join(texts, "\n");
  r.final_answer = join(answers, "\n");
  r.metadata["params"]["indices"] = chosen;
  return r;
}

InstructionRecord gen_layout_analysis(const DocumentPage& page, const BBox& target_area, Rng& rng,
                                      std::size_t k_neighbors) {
  require_segments(page, 1, "layout analysis");
  validate(target_area);
  if (!page.layout || page.layout->empty()) {
    throw GenerationError(fmt::format("page '{}' has no layout annotations", page.page_id));
  }
  if (k_neighbors < 1) throw ValidationError("k_neighbors", "must be at least 1");
  const auto& layout = *page.layout;

  std::size_t answer = layout.size();
  long best_area = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const long a = intersection_area(target_area, layout[i].bbox);
    if (a > best_area) {
      best_area = a;
      answer = i;
    }
  }
  if (answer == layout.size()) {
    throw GenerationError(fmt::format("page '{}': area {} intersects no layout element", page.page_id,
                                      format_box(target_area)));
  }

  InstructionRecord r = base_record(page, TaskKind::LayoutAnalysis, rng);
  const std::string area = format_box(target_area);
  r.question = pick(rng, {"What is the layout type of the area {}?",
                          "Determine the layout category of the region bounded by {}.",
                          "Which kind of layout element occupies {}?"});
  r.question = fmt::format(fmt::runtime(r.question), area);

  std::vector<CotStep> steps;

  // Step 1: contained text and coarse region.
  {
    BoundValues v{{"area", target_area},
                  {"region", std::string(to_string(page_region(target_area, kCoordMax, kCoordMax)))}};
    std::size_t n = 0;
    for (const TextSegment& seg : page.segments) {
      const Point c = center(seg.bbox);
      if (c.x >= target_area.left && c.x <= target_area.right && c.y >= target_area.top &&
          c.y <= target_area.bottom) {
        v[fmt::format("text_{}", ++n)] = seg.text;
      }
    }
    steps.push_back(make_step(TaskKind::LayoutAnalysis, 1, std::move(v)));
  }

  // Step 2: nearest other layout elements.
  {
    BoundValues v;
    std::vector<IndexedBox> candidates;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (i != answer) candidates.push_back({i, layout[i].bbox});
    }
    if (!candidates.empty()) {
      const auto nearest = nearest_segments(target_area, candidates, k_neighbors);
      for (std::size_t n = 0; n < nearest.size(); ++n) {
        const LayoutAnnotation& a = layout[nearest[n]];
        const std::string key = fmt::format("neighbor_{}", n + 1);
        v[key + "_type"] = std::string(to_string(a.type));
        v[key + "_box"] = a.bbox;
        v[key + "_distance"] = min_distance(target_area, a.bbox);
      }
    }
    steps.push_back(make_step(TaskKind::LayoutAnalysis, 2, std::move(v)));
  }

  // Step 3: conclusion.
  r.final_answer = std::string(to_string(layout[answer].type));
  steps.push_back(make_step(TaskKind::LayoutAnalysis, 3, {{"layout_type", r.final_answer}}));
  r.cot_steps = std::move(steps);
  r.metadata["params"] = {{"target_area", box_json(target_area)}, {"k_neighbors", k_neighbors}};
  return r;
}

InstructionRecord gen_table_analysis(const DocumentPage& page, std::size_t row, std::size_t col, Rng& rng,
                                     double min_gap, double column_tolerance) {
  require_segments(page, 1, "table analysis");
  StructureSource source{};
  const TableModel table = build_table(page, min_gap, column_tolerance, &source);
  std::size_t target = 0;
  try {
    target = cell_at(table, row, col);
  } catch (const RangeError& e) {
    if (!table.unassigned.empty()) {
      throw GenerationError(fmt::format("page '{}': {}; {} cell(s) matched no header column", page.page_id,
                                        e.what(), table.unassigned.size()));
    }
    throw;
  }

  InstructionRecord r = base_record(page, TaskKind::TableAnalysis, rng);
  r.question = fmt::format(fmt::runtime(pick(rng, {"What is the content of the cell in row {0}, column {1} of the table?",
                                                   "Find the table element at row {0} and column {1}.",
                                                   "Which value appears in column {1}, row {0} of the table?"})),
                           row, col);

  const auto column = static_cast<std::int64_t>(col);
  std::vector<CotStep> steps;
  {
    BoundValues v{{"column", column}};
    for (std::size_t j = 0; j < table.headers.size(); ++j) {
      const TextSegment& h = page.segment(table.headers[j]);
      v[fmt::format("header_{}_text", j + 1)] = h.text;
      v[fmt::format("header_{}_box", j + 1)] = h.bbox;
    }
    steps.push_back(make_step(TaskKind::TableAnalysis, 1, std::move(v)));
  }
  {
    BoundValues v{{"column", column}};
    const auto& cells = table.columns[col - 1];
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const TextSegment& c = page.segment(cells[i]);
      v[fmt::format("cell_{}_text", i + 1)] = c.text;
      v[fmt::format("cell_{}_box", i + 1)] = c.bbox;
    }
    steps.push_back(make_step(TaskKind::TableAnalysis, 2, std::move(v)));
  }
  r.final_answer = page.segment(target).text;
  steps.push_back(make_step(TaskKind::TableAnalysis, 3,
                            {{"row", static_cast<std::int64_t>(row)}, {"column", column}, {"answer", r.final_answer}}));
  r.cot_steps = std::move(steps);

  json columns = json::array();
  for (const auto& c : table.columns) columns.push_back(c);
  r.metadata["params"] = {{"row", row}, {"col", col}};
  r.metadata["thresholds"] = {{"min_gap", min_gap}, {"column_tolerance", column_tolerance}};
  r.metadata["structure"] = to_string(source);
  r.metadata["table_model"] = {{"headers", table.headers}, {"columns", std::move(columns)},
                               {"unassigned", table.unassigned}, {"n_rows", table.n_rows},
                               {"n_cols", table.n_cols}};
  return r;
}

InstructionRecord gen_masked_language(const DocumentPage& page, Rng& rng, double mask_rate) {
  require_segments(page, 1, "masked language");
  check_mask_rate(mask_rate);
  std::vector<std::vector<std::string>> lines;
  std::size_t total = 0;
  for (const TextSegment& s : page.segments) {
    lines.push_back(split_words(s.text));
    total += lines.back().size();
  }
  if (total == 0) throw GenerationError(fmt::format("page '{}' has no words", page.page_id));

  std::vector<bool> masked(total);
  for (std::size_t i = 0; i < total; ++i) masked[i] = rng.bernoulli(mask_rate);
  if (std::none_of(masked.begin(), masked.end(), [](bool m) { return m; })) {
    masked[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(total) - 1))] = true;
  }

  InstructionRecord r = base_record(page, TaskKind::MaskedLanguage, rng);
  std::vector<std::string> out_lines, answers;
  std::size_t w = 0;
  for (auto& words : lines) {
    for (std::string& word : words) {
      if (masked[w++]) {
        const std::string sentinel = fmt::format("[MASK_{}]", answers.size() + 1);
        answers.push_back(sentinel + ": " + word);
        word = sentinel;
      }
    }
    out_lines.push_back(join(words, " "));
  }
  r.question = pick(rng, {"Restore the masked words in the following OCR text:",
                          "Fill in each [MASK_n] placeholder in this text:",
                          "Some words below were hidden. Recover them:"}) +
               "\n" + join(out_lines, "\n");
  r.final_answer = join(answers, "\n");
  r.metadata["params"] = {{"mask_rate", mask_rate}};
  return r;
}

InstructionRecord gen_masked_position(const DocumentPage& page, Rng& rng, double mask_rate) {
  if (page.segments.size() < 2) {
    throw GenerationError(fmt::format("page '{}': masked position needs at least 2 segments, page has {}",
                                      page.page_id, page.segments.size()));
  }
  check_mask_rate(mask_rate);
  const std::size_t n = page.segments.size();
  std::vector<bool> masked(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (masked[i] = rng.bernoulli(mask_rate));
  if (count == 0) {
    masked[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))] = true;
  } else if (count == n) {
    masked[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))] = false;
  }

  InstructionRecord r = base_record(page, TaskKind::MaskedPosition, rng);
  std::vector<std::string> lines, answers;
  std::vector<std::size_t> indices;
  for (const TextSegment& s : page.segments) {
    if (masked[s.index]) {
      lines.push_back(s.text + ", " + std::string(kBoxPlaceholder));
      answers.push_back(s.text + ", " + format_box(s.bbox));
      indices.push_back(s.index);
    } else {
      lines.push_back(s.text + ", " + format_box(s.bbox));
    }
  }
  r.question = pick(rng, {"Some boxes are missing. Give the box for each [BOX?] entry:",
                          "Reconstruct the missing coordinates in this OCR listing:",
                          "Fill in the bounding boxes marked [BOX?]:"}) +
               "\n" + join(lines, "\n");
  r.final_answer = join(answers, "\n");
  r.metadata["params"] = {{"mask_rate", mask_rate}, {"masked_indices", indices}};
  return r;
}

InstructionRecord gen_geometric_analysis(const DocumentPage& page, std::size_t idx_a, std::size_t idx_b,
                                         GeometricQuery query, Rng& rng) {
  require_segments(page, 2, "geometric analysis");
  if (idx_a == idx_b) throw ValidationError("idx_b", fmt::format("identical segment indices {}", idx_a));
  const TextSegment& a = page.segment(idx_a);
  const TextSegment& b = page.segment(idx_b);

  BoundValues names{{"text_a", a.text}, {"text_b", b.text}};
  std::string name_a = quote(a.text);
  std::string name_b = quote(b.text);
  if (a.text == b.text) {
    name_a += fmt::format(" (#{})", idx_a + 1);
    name_b += fmt::format(" (#{})", idx_b + 1);
    names["ordinal_a"] = static_cast<std::int64_t>(idx_a + 1);
    names["ordinal_b"] = static_cast<std::int64_t>(idx_b + 1);
  }

  InstructionRecord r = base_record(page, TaskKind::GeometricAnalysis, rng);
  if (query == GeometricQuery::Distance) {
    r.question = pick(rng, {"What is the minimum distance between {} and {}?",
                            "How far apart are the text segments {} and {}?",
                            "Calculate the distance between {} and {}."});
  } else {
    r.question = pick(rng, {"In which direction is {1} relative to {0}?",
                            "Where is {1} located with respect to {0}?",
                            "Determine the direction from {0} to {1}."});
  }
  r.question = fmt::format(fmt::runtime(r.question), name_a, name_b);

  const ProjectionRelation rel = projection_relation(a.bbox, b.bbox);
  const Point ca = center(a.bbox);
  const Point cb = center(b.bbox);
  const Direction dir = relative_direction(a.bbox, b.bbox);
  const DistanceCase dcase = distance_case(rel);
  const double distance = min_distance(a.bbox, b.bbox);

  std::vector<CotStep> steps;
  {
    BoundValues v = names;
    v["box_a"] = a.bbox;
    v["box_b"] = b.bbox;
    steps.push_back(make_step(TaskKind::GeometricAnalysis, 1, std::move(v)));
  }
  steps.push_back(make_step(TaskKind::GeometricAnalysis, 2,
                            {{"box_a", a.bbox},
                             {"box_b", b.bbox},
                             {"horizontal_relation", std::string(to_string(rel.horizontal.kind))},
                             {"horizontal_amount", rel.horizontal.amount},
                             {"vertical_relation", std::string(to_string(rel.vertical.kind))},
                             {"vertical_amount", rel.vertical.amount}}));
  {
    BoundValues v = names;
    v["center_a_x"] = ca.x;
    v["center_a_y"] = ca.y;
    v["center_b_x"] = cb.x;
    v["center_b_y"] = cb.y;
    v["direction"] = std::string(to_string(dir));
    steps.push_back(make_step(TaskKind::GeometricAnalysis, 3, std::move(v)));
  }
  {
    BoundValues v{{"distance_case", std::string(to_string(dcase))}, {"distance", distance}};
    if (dcase == DistanceCase::HorizontalGap || dcase == DistanceCase::Corner) v["horizontal_gap"] = rel.horizontal.amount;
    if (dcase == DistanceCase::VerticalGap || dcase == DistanceCase::Corner) v["vertical_gap"] = rel.vertical.amount;
    steps.push_back(make_step(TaskKind::GeometricAnalysis, 4, std::move(v)));
  }
  r.cot_steps = std::move(steps);
  r.final_answer = query == GeometricQuery::Distance ? format_fixed2(distance) : std::string(to_string(dir));
  r.metadata["params"] = {{"idx_a", idx_a}, {"idx_b", idx_b}, {"query", to_string(query)}};
  return r;
}

std::string apply_masked_language_answer(std::string_view question, std::string_view answer) {
  std::string text = question_body(question);
  std::size_t n = 0;
  for (std::string_view line : split_lines(answer)) {
    ++n;
    const std::string sentinel = fmt::format("[MASK_{}]", n);
    const std::string prefix = sentinel + ": ";
    if (line.substr(0, prefix.size()) != prefix) {
      throw ValidationError("answer", fmt::format("line {} does not start with '{}'", n, prefix));
    }
    const std::size_t pos = text.find(sentinel);
    if (pos == std::string::npos) throw ValidationError("question", fmt::format("sentinel {} not found", sentinel));
    text.replace(pos, sentinel.size(), line.substr(prefix.size()));
  }
  if (n == 0) throw ValidationError("answer", "no masked words");
  return text;
}

std::string apply_masked_position_answer(std::string_view question, std::string_view answer) {
  std::string text = question_body(question);
  std::size_t pos = 0;
  std::size_t n = 0;
  for (std::string_view line : split_lines(answer)) {
    ++n;
    const std::size_t open = line.rfind(", [");
    if (open == std::string_view::npos || line.back() != ']') {
      throw ValidationError("answer", fmt::format("line {} carries no box", n));
    }
    pos = text.find(kBoxPlaceholder, pos);
    if (pos == std::string::npos) throw ValidationError("question", fmt::format("no placeholder for line {}", n));
    const std::string_view box = line.substr(open + 2);
    text.replace(pos, kBoxPlaceholder.size(), box);
    pos += box.size();
  }
  if (n == 0) throw ValidationError("answer", "no boxes");
  if (text.find(kBoxPlaceholder, pos) != std::string::npos) {
    throw ValidationError("answer", "fewer boxes than placeholders");
  }
  return text;
}

InstructionRecord generate_task(const DocumentPage& page, TaskKind task, Rng& rng, const GeneratorOptions& options) {
  const auto n = static_cast<std::int64_t>(page.segments.size());
  if (n == 0) throw GenerationError(fmt::format("page '{}' is empty", page.page_id));
  switch (task) {
    case TaskKind::DocumentDescription:
      return gen_document_description(page, rng);
    case TaskKind::TextBoxReconstruction:
      return gen_text_box_reconstruction(page, rng, std::min<std::size_t>(options.sample_k, page.segments.size()));
    case TaskKind::LayoutAnalysis: {
      if (!page.layout || page.layout->empty()) {
        throw GenerationError(fmt::format("page '{}' has no layout annotations", page.page_id));
      }
      const auto& layout = *page.layout;
      const BBox& a = layout[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(layout.size()) - 1))].bbox;
      // A sub-area keeping at least half of each side of the chosen element.
      const int dw = a.width() / 4;
      const int dh = a.height() / 4;
      const BBox target{a.left + static_cast<int>(rng.uniform_int(0, dw)), a.top + static_cast<int>(rng.uniform_int(0, dh)),
                        a.right - static_cast<int>(rng.uniform_int(0, dw)), a.bottom - static_cast<int>(rng.uniform_int(0, dh))};
      return gen_layout_analysis(page, target, rng, options.k_neighbors);
    }
    case TaskKind::TableAnalysis: {
      const TableModel table = build_table(page, options.min_gap, options.column_tolerance);
      std::vector<std::size_t> usable;
      for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (!table.columns[j].empty()) usable.push_back(j);
      }
      if (usable.empty()) throw GenerationError(fmt::format("page '{}': table has no body cells", page.page_id));
      const std::size_t col = usable[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(usable.size()) - 1))];
      const auto row = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(table.columns[col].size())));
      return gen_table_analysis(page, row, col + 1, rng, options.min_gap, options.column_tolerance);
    }
    case TaskKind::MaskedLanguage:
      return gen_masked_language(page, rng, options.mask_rate);
    case TaskKind::MaskedPosition:
      return gen_masked_position(page, rng, options.mask_rate);
    case TaskKind::GeometricAnalysis: {
      if (n < 2) throw GenerationError(fmt::format("page '{}': geometric analysis needs 2 segments", page.page_id));
      const auto a = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
      auto b = static_cast<std::size_t>(rng.uniform_int(0, n - 2));
      if (b >= a) ++b;
      const GeometricQuery q = rng.bernoulli(0.5) ? GeometricQuery::Distance : GeometricQuery::Direction;
      return gen_geometric_analysis(page, a, b, q, rng);
    }
  }
  throw GenerationError("unknown task");
}

}  // namespace doclay
