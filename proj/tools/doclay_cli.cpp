// Command-line front end for the doclay data pipeline.
//
//   doclay ingest        --input raw.jsonl   --output pages.jsonl
//   doclay generate      --input pages.jsonl --output records.jsonl [--config cfg.json] [--seed N] [--workers N]
//   doclay anneal-plan   --output plan.jsonl [--config cfg.json] [--seed N]
//   doclay length-report --input pages.jsonl --output lengths.csv [--config cfg.json]
//   doclay validate      --input records.jsonl --pages pages.jsonl [--workers N]
//   doclay stats         --input records.jsonl
//
// Exit codes: 0 success, 1 validation failures present, 2 fatal config/IO error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "doclay/config.hpp"
#include "doclay/error.hpp"
#include "doclay/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string input;
  std::string output;
  std::size_t workers = 1;
};

doclay::PipelineConfig resolve_config(const CommonFlags& flags) {
  doclay::PipelineConfig config = flags.config.empty() ? doclay::PipelineConfig{} : doclay::load_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  config.validate();
  return config;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool input, bool output) {
  cmd->add_option("--config", flags.config, "Pipeline configuration (flat JSON with dotted keys)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Seed overriding the configuration");
  auto* in = cmd->add_option("--input", flags.input, "Input file");
  auto* out = cmd->add_option("--output", flags.output, "Output file");
  cmd->add_option("--workers", flags.workers, "Worker threads")->check(CLI::Range(1, 256));
  if (input) in->required();
  if (output) out->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OCR document instruction-data pipeline"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string pages;

  auto* ingest = app.add_subcommand("ingest", "Normalize raw OCR JSONL into page records");
  add_common(ingest, flags, true, true);
  auto* generate = app.add_subcommand("generate", "Synthesize rendered instruction examples");
  add_common(generate, flags, true, true);
  auto* anneal = app.add_subcommand("anneal-plan", "Write the per-step CoT/direct mix plan");
  add_common(anneal, flags, false, true);
  auto* length = app.add_subcommand("length-report", "Compare OCR input length with textual vs embedded boxes");
  add_common(length, flags, true, true);
  auto* validate = app.add_subcommand("validate", "Re-verify rendered examples against their source pages");
  add_common(validate, flags, true, false);
  validate->add_option("--pages", pages, "Ingested pages JSONL")->required();
  auto* stats = app.add_subcommand("stats", "Count rendered examples per task and mode");
  add_common(stats, flags, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? doclay::kExitOk : doclay::kExitFatal;
  }

  try {
    if (ingest->parsed()) {
      const auto s = doclay::cmd_ingest(flags.input, flags.output, std::cerr);
      fmt::print("{} pages ingested, {} rejected\n", s.valid, s.rejected);
    } else if (generate->parsed()) {
      const auto config = resolve_config(flags);
      const auto s = doclay::cmd_generate(flags.input, config, flags.output, flags.workers, std::cerr);
      fmt::print("{} pages, {} records, {} examples written, {} generation failures\n", s.pages, s.records,
                 s.examples, s.failures);
    } else if (anneal->parsed()) {
      const auto config = resolve_config(flags);
      const auto plan = doclay::cmd_anneal_plan(config, flags.output, std::cout);
      fmt::print("{} steps written\n", plan.steps.size());
    } else if (length->parsed()) {
      const auto config = resolve_config(flags);
      doclay::cmd_length_report(flags.input, config, flags.output, std::cout);
    } else if (validate->parsed()) {
      const auto s = doclay::cmd_validate(flags.input, pages, flags.workers, std::cout);
      return s.violations.empty() ? doclay::kExitOk : doclay::kExitViolations;
    } else if (stats->parsed()) {
      doclay::print_stats(std::cout, doclay::cmd_stats(flags.input));
    }
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "fatal: {}\n", e.what());
    return doclay::kExitFatal;
  }
  return doclay::kExitOk;
}
