#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "doclay/anneal.hpp"
#include "doclay/cot.hpp"
#include "doclay/prompt.hpp"
#include "doclay/records.hpp"

namespace doclay {

struct ScheduleConfig {
  ScheduleShape shape = ScheduleShape::Linear;
  std::int64_t total_steps = 1000;
  std::int64_t batch_size = 64;
  std::vector<Knot> knots;  // piecewise only

  AnnealSchedule build() const;
};

struct PipelineConfig {
  double min_gap = kDefaultMinGap;
  double column_tolerance = kDefaultColumnTolerance;
  double mask_rate = kDefaultMaskRate;
  std::size_t k_neighbors = kDefaultNeighbors;
  std::size_t sample_k = 5;
  std::size_t records_per_page = 1;
  PatchGrid grid;
  std::size_t max_length = kDefaultMaxLength;
  bool enforce_max_length = false;
  ScheduleConfig schedule;
  std::uint64_t seed = 0;
  std::array<double, std::size(kAllTasks)> task_mix{1, 1, 1, 1, 1, 1, 1};

  GeneratorOptions generator_options() const;
  double weight(TaskKind t) const { return task_mix[static_cast<std::size_t>(t)]; }

  // Throws ValidationError naming the first out-of-range key.
  void validate() const;
};

// Flat JSON object with dotted keys, e.g.
//   {"seed": 7, "schedule.shape": "cosine", "task_mix.TableAnalysis": 2}
// Keys not listed here are rejected. Absent keys keep their defaults.
PipelineConfig parse_config(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const PipelineConfig& config);

}  // namespace doclay
