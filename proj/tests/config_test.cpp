#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "doclay/config.hpp"
#include "doclay/error.hpp"

using namespace doclay;
using nlohmann::json;

namespace {

std::string where_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ValidationError& e) {
    return e.where();
  }
  return "<accepted>";
}

TEST(Config, Defaults) {
  const PipelineConfig c = parse_config(json::object());
  EXPECT_EQ(c.min_gap, 10.0);
  EXPECT_EQ(c.column_tolerance, 50.0);
  EXPECT_EQ(c.mask_rate, 0.15);
  EXPECT_EQ(c.k_neighbors, 3u);
  EXPECT_EQ(c.max_length, 2560u);
  EXPECT_EQ(c.grid.patch_count(), 196);
  EXPECT_EQ(c.schedule.total_steps, 1000);
  EXPECT_EQ(c.schedule.batch_size, 64);
  for (TaskKind t : kAllTasks) EXPECT_EQ(c.weight(t), 1.0);
}

TEST(Config, ParsesDottedKeys) {
  const PipelineConfig c = parse_config(json::parse(R"({
    "seed": 42, "min_gap": 12.5, "records_per_page": 3,
    "schedule.shape": "piecewise", "schedule.total_steps": 200, "schedule.knots": [[100, 0.5]],
    "task_mix.TableAnalysis": 3, "task_mix.MaskedLanguage": 0, "enforce_max_length": true
  })"));
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.min_gap, 12.5);
  EXPECT_EQ(c.records_per_page, 3u);
  EXPECT_EQ(c.schedule.shape, ScheduleShape::Piecewise);
  EXPECT_DOUBLE_EQ(c.schedule.build().cot_fraction(50), 0.75);
  EXPECT_EQ(c.weight(TaskKind::TableAnalysis), 3.0);
  EXPECT_EQ(c.weight(TaskKind::MaskedLanguage), 0.0);
  EXPECT_TRUE(c.enforce_max_length);
}

TEST(Config, RejectsUnknownAndOutOfRangeKeys) {
  EXPECT_EQ(where_of({{"min_gpa", 3}}), "min_gpa");
  EXPECT_EQ(where_of({{"task_mix.Poetry", 1}}), "task_mix.Poetry");
  EXPECT_EQ(where_of({{"min_gap", 0}}), "min_gap");
  EXPECT_EQ(where_of({{"mask_rate", 0.9}}), "mask_rate");
  EXPECT_EQ(where_of({{"k_neighbors", -1}}), "k_neighbors");
  EXPECT_EQ(where_of({{"seed", "abc"}}), "seed");
  EXPECT_EQ(where_of({{"grid.patch_side", 15}}), "grid.patch_side");
  EXPECT_EQ(where_of({{"schedule.shape", "step"}}), "schedule.shape");
  EXPECT_EQ(where_of({{"schedule.batch_size", 0}}), "schedule.batch_size");
  EXPECT_EQ(where_of({{"schedule.knots", json::array({json::array({5, 0.5})})}}), "schedule.knots");
  EXPECT_EQ(where_of({{"schedule.shape", "piecewise"}, {"schedule.knots", json::array({json::array({5, 2})})}}),
            "schedule.knots[1]");
  json none = json::object();
  for (TaskKind t : kAllTasks) none[std::string("task_mix.") + std::string(to_string(t))] = 0;
  EXPECT_EQ(where_of(none), "task_mix");
  EXPECT_EQ(where_of(json::array()), "config");
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c = parse_config(json::parse(R"({"seed": 9, "schedule.shape": "cosine", "task_mix.LayoutAnalysis": 2.5})"));
  const PipelineConfig again = parse_config(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "doclay_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 5})";
  }
  EXPECT_EQ(load_config(path).seed, 5u);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(load_config(path), ValidationError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), FatalError);
}

}  // namespace
