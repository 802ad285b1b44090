#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doclay/anneal.hpp"
#include "doclay/config.hpp"
#include "doclay/document.hpp"
#include "doclay/prompt.hpp"
#include "doclay/records.hpp"
#include "doclay/verify.hpp"

namespace doclay {

namespace fs = std::filesystem;

// Exit codes shared by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitFatal = 2;

struct IngestSummary {
  std::size_t valid = 0;
  std::size_t rejected = 0;
};

// Normalizes an OCR JSONL file page by page. Bad lines are logged with their
// 1-based line number and skipped. Throws FatalError on unreadable input or
// when no page is valid.
IngestSummary cmd_ingest(const fs::path& input, const fs::path& output, std::ostream& log);

// Records for one page, both renders where steps exist. The page's generator
// is seeded from (config.seed, page_id). Per-record failures are appended to
// `errors` and skipped.
std::vector<RenderedExample> generate_page(const DocumentPage& page, const PipelineConfig& config,
                                           std::vector<std::string>* errors = nullptr);

struct GenerateSummary {
  std::size_t pages = 0;
  std::size_t records = 0;   // instruction records generated
  std::size_t examples = 0;  // rendered lines written
  std::size_t failures = 0;
};

// Streams ingested pages through generate_page on `workers` threads; output
// order is page order regardless of the worker count.
GenerateSummary cmd_generate(const fs::path& pages, const PipelineConfig& config, const fs::path& output,
                             std::size_t workers, std::ostream& log);

// Writes the plan as JSONL and prints the audit summary to `log`.
MixPlan cmd_anneal_plan(const PipelineConfig& config, const fs::path& output, std::ostream& log);

// Writes the CSV report. Throws FatalError when no page has OCR content.
LengthReport cmd_length_report(const fs::path& pages, const PipelineConfig& config, const fs::path& output,
                               std::ostream& log);

struct ValidationSummary {
  std::size_t records = 0;
  std::vector<Violation> violations;
};

ValidationSummary cmd_validate(const fs::path& records, const fs::path& pages, std::size_t workers,
                               std::ostream& log);

struct CorpusStats {
  std::map<std::pair<TaskKind, RenderMode>, std::size_t> counts;
  std::size_t total = 0;
};

CorpusStats cmd_stats(const fs::path& records);
void print_stats(std::ostream& out, const CorpusStats& stats);

}  // namespace doclay
