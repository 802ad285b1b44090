#include "doclay/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "doclay/cot.hpp"
#include "doclay/error.hpp"
#include "doclay/rng.hpp"

namespace doclay {

namespace {

using nlohmann::json;

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FatalError(fmt::format("cannot read '{}'", path.string()));
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FatalError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
};

// Reads lines in batches, maps each on up to `workers` threads and hands the
// results to `sink` in input order. Memory is bounded by one batch.
template <typename Result>
void map_lines(std::istream& in, std::size_t workers, const std::function<Result(const Line&)>& fn,
               const std::function<void(const Line&, Result&)>& sink) {
  workers = std::max<std::size_t>(workers, 1);
  const std::size_t batch_size = 256 * workers;
  std::vector<Line> batch;
  std::vector<Result> results;
  std::size_t number = 0;
  bool eof = false;
  while (!eof) {
    batch.clear();
    std::string text;
    while (batch.size() < batch_size) {
      if (!std::getline(in, text)) {
        eof = true;
        break;
      }
      ++number;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (trim(text).empty()) continue;
      batch.push_back({number, std::move(text)});
    }
    results.assign(batch.size(), Result{});
    if (workers == 1 || batch.size() < 2) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i] = fn(batch[i]);
    } else {
      std::vector<std::thread> pool;
      const std::size_t n = std::min(workers, batch.size());
      for (std::size_t w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < batch.size(); i += n) results[i] = fn(batch[i]);
        });
      }
      for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) sink(batch[i], results[i]);
  }
}

// Cheap structural prerequisites; the generators still have the final say.
bool page_supports(const DocumentPage& page, TaskKind task) {
  switch (task) {
    case TaskKind::LayoutAnalysis:
      return page.layout && !page.layout->empty();
    case TaskKind::MaskedPosition:
    case TaskKind::GeometricAnalysis:
      return page.size() >= 2;
    default:
      return !page.segments.empty();
  }
}

std::optional<TaskKind> sample_task(const PipelineConfig& config, const DocumentPage& page, Rng& rng) {
  double total = 0;
  for (TaskKind t : kAllTasks) {
    if (page_supports(page, t)) total += config.weight(t);
  }
  if (total <= 0) return std::nullopt;
  double u = rng.uniform() * total;
  std::optional<TaskKind> last;
  for (TaskKind t : kAllTasks) {
    if (config.weight(t) <= 0 || !page_supports(page, t)) continue;
    last = t;
    if (u < config.weight(t)) return t;
    u -= config.weight(t);
  }
  return last;
}

void annotate_length(InstructionRecord& record, const DocumentPage& page, const PipelineConfig& config) {
  PromptSlotSequence seq = assemble(page, record.question, CoordMode::EmbeddedCoords, config.grid);
  const std::size_t tokens = sequence_shape(seq).total;
  record.metadata["prompt_tokens"] = tokens;
  record.metadata["over_length"] = tokens > config.max_length;
  if (config.enforce_max_length && tokens > config.max_length) {
    record.metadata["truncated_segments"] = truncate_to_fit(seq, config.max_length);
  }
}

struct PageOutput {
  std::string text;
  std::vector<std::string> errors;
  std::size_t records = 0;
  std::size_t examples = 0;
  bool page_ok = true;
};

}  // namespace

IngestSummary cmd_ingest(const fs::path& input, const fs::path& output, std::ostream& log) {
  std::ifstream in = open_input(input);
  std::ofstream out = open_output(output);
  IngestSummary summary;

  struct Result {
    std::string text;
    std::vector<std::string> warnings;
    std::string error;
  };
  map_lines<Result>(
      in, 1,
      [](const Line& line) {
        Result r;
        try {
          IngestOptions options;
          options.warnings = &r.warnings;
          r.text = page_to_json(ingest_page_line(line.text, options)).dump();
        } catch (const std::exception& e) {
          r.error = e.what();
        }
        return r;
      },
      [&](const Line& line, Result& r) {
        for (const auto& w : r.warnings) fmt::print(log, "line {}: warning: {}\n", line.number, w);
        if (!r.error.empty()) {
          fmt::print(log, "line {}: {}\n", line.number, r.error);
          ++summary.rejected;
          return;
        }
        out << r.text << '\n';
        ++summary.valid;
      });
  if (!out) throw FatalError(fmt::format("write to '{}' failed", output.string()));
  if (summary.valid == 0) throw FatalError(fmt::format("no valid pages in '{}'", input.string()));
  return summary;
}

std::vector<RenderedExample> generate_page(const DocumentPage& page, const PipelineConfig& config,
                                           std::vector<std::string>* errors) {
  Rng rng(substream_seed(config.seed, page.page_id));
  const GeneratorOptions options = config.generator_options();
  std::vector<RenderedExample> out;
  for (std::size_t r = 0; r < config.records_per_page; ++r) {
    const std::optional<TaskKind> sampled = sample_task(config, page, rng);
    if (!sampled) {
      if (errors) errors->push_back(fmt::format("page '{}': no enabled task applies", page.page_id));
      break;
    }
    const TaskKind task = *sampled;
    try {
      InstructionRecord record = generate_task(page, task, rng, options);
      record.record_id = fmt::format("{}:{}:{}", page.page_id, r, to_string(task));
      record.metadata["page_seed"] = rng.seed();
      annotate_length(record, page, config);
      if (record.cot_steps) {
        out.push_back(make_example(record, RenderMode::WithCot));
        out.push_back(make_example(derive_direct(record), RenderMode::DirectAnswer));
      } else {
        out.push_back(make_example(record, RenderMode::DirectAnswer));
      }
    } catch (const std::exception& e) {
      if (errors) errors->push_back(fmt::format("page '{}' record {} ({}): {}", page.page_id, r, to_string(task), e.what()));
    }
  }
  return out;
}

GenerateSummary cmd_generate(const fs::path& pages, const PipelineConfig& config, const fs::path& output,
                             std::size_t workers, std::ostream& log) {
  config.validate();
  std::ifstream in = open_input(pages);
  std::ofstream out = open_output(output);
  GenerateSummary summary;

  map_lines<PageOutput>(
      in, workers,
      [&config](const Line& line) {
        PageOutput result;
        try {
          const DocumentPage page = ingest_page_line(line.text);
          for (const RenderedExample& ex : generate_page(page, config, &result.errors)) {
            result.text += to_json(ex).dump();
            result.text += '\n';
            ++result.examples;
            if (ex.mode == RenderMode::WithCot || !ex.metadata.value("derived_direct", false)) ++result.records;
          }
        } catch (const std::exception& e) {
          result.page_ok = false;
          result.errors.push_back(fmt::format("line {}: {}", line.number, e.what()));
        }
        return result;
      },
      [&](const Line&, PageOutput& result) {
        for (const auto& e : result.errors) fmt::print(log, "{}\n", e);
        summary.pages += result.page_ok;
        summary.failures += result.errors.size();
        summary.records += result.records;
        summary.examples += result.examples;
        out << result.text;
      });
  if (!out) throw FatalError(fmt::format("write to '{}' failed", output.string()));
  return summary;
}

MixPlan cmd_anneal_plan(const PipelineConfig& config, const fs::path& output, std::ostream& log) {
  const AnnealSchedule schedule = config.schedule.build();
  MixPlan plan = plan_batches(schedule, config.schedule.batch_size, config.seed);
  std::ofstream out = open_output(output);
  for (const StepMix& m : plan.steps) out << to_json(m).dump() << '\n';
  if (!out) throw FatalError(fmt::format("write to '{}' failed", output.string()));

  std::int64_t cot = 0;
  for (const StepMix& m : plan.steps) cot += m.n_cot;
  fmt::print(log, "shape={} steps={} batch_size={} seed={}\n", to_string(schedule.shape()), plan.steps.size(),
             plan.batch_size, plan.seed);
  fmt::print(log, "cot_examples={} direct_examples={}\n", cot,
             static_cast<std::int64_t>(plan.steps.size()) * plan.batch_size - cot);
  fmt::print(log, "audit windows={} (length {}) max_deviation={:.4f}\n", plan.audit.size(), plan.window,
             plan.max_window_deviation());
  return plan;
}

LengthReport cmd_length_report(const fs::path& pages, const PipelineConfig& config, const fs::path& output,
                               std::ostream& log) {
  std::ifstream in = open_input(pages);
  LengthAccumulator acc(config.grid, config.max_length);
  std::size_t with_text = 0;
  map_lines<std::string>(
      in, 1, [](const Line&) { return std::string(); },
      [&](const Line& line, std::string&) {
        try {
          const DocumentPage page = ingest_page_line(line.text);
          with_text += !page.segments.empty();
          acc.add(measure_page(page, count_tokens, config.grid));
        } catch (const std::exception& e) {
          fmt::print(log, "line {}: {}\n", line.number, e.what());
        }
      });
  if (with_text == 0) throw FatalError(fmt::format("no OCR content to measure in '{}'", pages.string()));
  LengthReport report = std::move(acc).finish();

  std::ofstream out = open_output(output);
  write_length_csv(out, report);
  if (!out) throw FatalError(fmt::format("write to '{}' failed", output.string()));
  fmt::print(log, "pages={} mean_mode_I={:.2f} mean_mode_II={:.2f} ratio={:.3f}\n", report.pages.size(),
             report.mean_textual, report.mean_embedded, report.ratio);
  fmt::print(log, "patch_tokens={} over_length_mode_I={} over_length_mode_II={} (max_length {})\n",
             report.patch_tokens, report.over_length_textual, report.over_length_embedded, config.max_length);
  return report;
}

ValidationSummary cmd_validate(const fs::path& records, const fs::path& pages, std::size_t workers,
                               std::ostream& log) {
  std::unordered_map<std::string, DocumentPage> by_id;
  {
    std::ifstream in = open_input(pages);
    map_lines<std::string>(
        in, 1, [](const Line&) { return std::string(); },
        [&](const Line& line, std::string&) {
          try {
            DocumentPage page = ingest_page_line(line.text);
            std::string id = page.page_id;
            by_id.insert_or_assign(std::move(id), std::move(page));
          } catch (const std::exception& e) {
            fmt::print(log, "pages line {}: {}\n", line.number, e.what());
          }
        });
  }

  ValidationSummary summary;
  std::ifstream in = open_input(records);
  map_lines<std::vector<Violation>>(
      in, workers,
      [&by_id](const Line& line) {
        std::vector<Violation> v;
        RenderedExample ex;
        try {
          ex = example_from_json(json::parse(line.text));
        } catch (const std::exception& e) {
          v.push_back({fmt::format("line {}", line.number), std::nullopt, fmt::format("unreadable record: {}", e.what())});
          return v;
        }
        auto it = by_id.find(ex.page_id);
        return verify_example(ex, it == by_id.end() ? nullptr : &it->second);
      },
      [&](const Line&, std::vector<Violation>& v) {
        ++summary.records;
        for (Violation& x : v) {
          fmt::print(log, "{}\n", format_violation(x));
          summary.violations.push_back(std::move(x));
        }
      });
  fmt::print(log, "{} records checked, {} violations\n", summary.records, summary.violations.size());
  return summary;
}

CorpusStats cmd_stats(const fs::path& records) {
  std::ifstream in = open_input(records);
  CorpusStats stats;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      const RenderedExample ex = example_from_json(json::parse(line));
      ++stats.counts[{ex.task, ex.mode}];
      ++stats.total;
    } catch (const std::exception& e) {
      throw FatalError(fmt::format("line {}: {}", number, e.what()));
    }
  }
  return stats;
}

void print_stats(std::ostream& out, const CorpusStats& stats) {
  fmt::print(out, "{:<24}{:>10}{:>10}\n", "task", "cot", "direct");
  for (TaskKind t : kAllTasks) {
    auto count = [&](RenderMode m) {
      auto it = stats.counts.find({t, m});
      return it == stats.counts.end() ? std::size_t{0} : it->second;
    };
    fmt::print(out, "{:<24}{:>10}{:>10}\n", to_string(t), count(RenderMode::WithCot), count(RenderMode::DirectAnswer));
  }
  fmt::print(out, "total {}\n", stats.total);
}

}  // namespace doclay
