#include "doclay/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "doclay/error.hpp"

namespace doclay {

namespace {

using nlohmann::json;

template <typename T>
T as(const json& v, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ValidationError(key, "expected true or false");
    return v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ValidationError(key, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<std::int64_t>() < 0) throw ValidationError(key, "expected a non-negative integer");
    }
    return v.get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ValidationError(key, "expected a number");
    return v.get<T>();
  } else {
    if (!v.is_string()) throw ValidationError(key, "expected a string");
    return v.get<T>();
  }
}

void check(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ValidationError(key, what);
}

}  // namespace

AnnealSchedule ScheduleConfig::build() const {
  switch (shape) {
    case ScheduleShape::Linear: return AnnealSchedule::linear(total_steps);
    case ScheduleShape::Cosine: return AnnealSchedule::cosine(total_steps);
    case ScheduleShape::Piecewise: return AnnealSchedule::piecewise(total_steps, knots);
  }
  return AnnealSchedule::linear(total_steps);
}

GeneratorOptions PipelineConfig::generator_options() const {
  return {min_gap, column_tolerance, mask_rate, k_neighbors, sample_k};
}

void PipelineConfig::validate() const {
  check(min_gap > 0 && min_gap <= kCoordMax, "min_gap", fmt::format("{} outside (0, {}]", min_gap, kCoordMax));
  check(column_tolerance >= 0 && column_tolerance <= kCoordMax, "column_tolerance",
        fmt::format("{} outside [0, {}]", column_tolerance, kCoordMax));
  check(mask_rate > 0 && mask_rate <= kMaxMaskRate, "mask_rate",
        fmt::format("{} outside (0, {}]", mask_rate, kMaxMaskRate));
  check(k_neighbors >= 1 && k_neighbors <= 100, "k_neighbors", fmt::format("{} outside [1, 100]", k_neighbors));
  check(sample_k >= 1 && sample_k <= 1000, "sample_k", fmt::format("{} outside [1, 1000]", sample_k));
  check(records_per_page >= 1 && records_per_page <= 1000, "records_per_page",
        fmt::format("{} outside [1, 1000]", records_per_page));
  try {
    grid.patch_count();
  } catch (const ValidationError& e) {
    throw ValidationError("grid." + e.where(), e.what());
  }
  check(max_length >= 1, "max_length", "must be positive");
  check(schedule.total_steps >= 1, "schedule.total_steps", fmt::format("must be positive, got {}", schedule.total_steps));
  check(schedule.batch_size >= 1, "schedule.batch_size", fmt::format("must be positive, got {}", schedule.batch_size));
  check(schedule.knots.empty() || schedule.shape == ScheduleShape::Piecewise, "schedule.knots",
        "knots apply only to the piecewise shape");
  schedule.build();
  bool any = false;
  for (double w : task_mix) {
    check(w >= 0 && std::isfinite(w), "task_mix", "weights must be finite and non-negative");
    any = any || w > 0;
  }
  check(any, "task_mix", "at least one weight must be positive");
}

PipelineConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config", "expected a flat JSON object");
  PipelineConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "seed") c.seed = as<std::uint64_t>(v, key);
    else if (key == "min_gap") c.min_gap = as<double>(v, key);
    else if (key == "column_tolerance") c.column_tolerance = as<double>(v, key);
    else if (key == "mask_rate") c.mask_rate = as<double>(v, key);
    else if (key == "k_neighbors") c.k_neighbors = as<std::size_t>(v, key);
    else if (key == "sample_k") c.sample_k = as<std::size_t>(v, key);
    else if (key == "records_per_page") c.records_per_page = as<std::size_t>(v, key);
    else if (key == "grid.image_side") c.grid.image_side = as<int>(v, key);
    else if (key == "grid.patch_side") c.grid.patch_side = as<int>(v, key);
    else if (key == "max_length") c.max_length = as<std::size_t>(v, key);
    else if (key == "enforce_max_length") c.enforce_max_length = as<bool>(v, key);
    else if (key == "schedule.shape") {
      const auto name = as<std::string>(v, key);
      auto shape = parse_schedule_shape(name);
      if (!shape) throw ValidationError(key, fmt::format("unknown shape '{}'", name));
      c.schedule.shape = *shape;
    } else if (key == "schedule.total_steps") c.schedule.total_steps = as<std::int64_t>(v, key);
    else if (key == "schedule.batch_size") c.schedule.batch_size = as<std::int64_t>(v, key);
    else if (key == "schedule.knots") {
      if (!v.is_array()) throw ValidationError(key, "expected an array of [step, fraction] pairs");
      for (const json& k : v) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ValidationError(key, "expected an array of [step, fraction] pairs");
        }
        c.schedule.knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
    } else if (key.rfind("task_mix.", 0) == 0) {
      auto task = parse_task(std::string_view(key).substr(9));
      if (!task) throw ValidationError(key, "unknown task");
      c.task_mix[static_cast<std::size_t>(*task)] = as<double>(v, key);
    } else {
      throw ValidationError(key, "unknown configuration key");
    }
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FatalError(fmt::format("cannot read config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), fmt::format("malformed config: {}", e.what()));
  }
  return parse_config(doc);
}

json to_json(const PipelineConfig& c) {
  json out = {{"seed", c.seed},
              {"min_gap", c.min_gap},
              {"column_tolerance", c.column_tolerance},
              {"mask_rate", c.mask_rate},
              {"k_neighbors", c.k_neighbors},
              {"sample_k", c.sample_k},
              {"records_per_page", c.records_per_page},
              {"grid.image_side", c.grid.image_side},
              {"grid.patch_side", c.grid.patch_side},
              {"max_length", c.max_length},
              {"enforce_max_length", c.enforce_max_length},
              {"schedule.shape", to_string(c.schedule.shape)},
              {"schedule.total_steps", c.schedule.total_steps},
              {"schedule.batch_size", c.schedule.batch_size}};
  if (!c.schedule.knots.empty()) {
    json knots = json::array();
    for (const Knot& k : c.schedule.knots) knots.push_back({k.step, k.fraction});
    out["schedule.knots"] = std::move(knots);
  }
  for (TaskKind t : kAllTasks) out[fmt::format("task_mix.{}", to_string(t))] = c.weight(t);
  return out;
}

}  // namespace doclay
