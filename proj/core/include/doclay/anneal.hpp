#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "doclay/records.hpp"

namespace doclay {

enum class ScheduleShape { Linear, Cosine, Piecewise };

std::string_view to_string(ScheduleShape s) noexcept;
std::optional<ScheduleShape> parse_schedule_shape(std::string_view s) noexcept;

struct Knot {
  double step = 0;
  double fraction = 0;
};

// Fraction of CoT-rendered examples over training. The curve starts at 1
// and ends at 0 for every shape.
class AnnealSchedule {
 public:
  static AnnealSchedule linear(std::int64_t total_steps);
  static AnnealSchedule cosine(std::int64_t total_steps);
  // Knots are interpolated linearly. (0, 1) and (T, 0) are added when absent;
  // steps must increase strictly and fractions must not increase.
  static AnnealSchedule piecewise(std::int64_t total_steps, std::vector<Knot> knots);

  std::int64_t total_steps() const noexcept { return total_steps_; }
  ScheduleShape shape() const noexcept { return shape_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  // Throws RangeError outside [0, T].
  double cot_fraction(double step) const;

 private:
  AnnealSchedule(std::int64_t total_steps, ScheduleShape shape, std::vector<Knot> knots = {});

  std::int64_t total_steps_;
  ScheduleShape shape_;
  std::vector<Knot> knots_;
};

struct StepMix {
  std::int64_t step = 0;
  std::int64_t n_cot = 0;
  std::int64_t n_direct = 0;
  friend bool operator==(const StepMix&, const StepMix&) = default;
};

struct WindowAudit {
  std::int64_t start = 0;  // window covers [start, start + length)
  double realized = 0;     // realized CoT fraction
  double expected = 0;     // mean schedule fraction
};

struct MixPlan {
  std::vector<StepMix> steps;
  std::uint64_t seed = 0;
  std::int64_t batch_size = 0;
  std::int64_t window = 0;
  std::vector<WindowAudit> audit;  // every consecutive window of `window` steps

  double max_window_deviation() const noexcept;
};

inline constexpr std::int64_t kAuditWindow = 50;

// Where plan step s (0-based, of T) reads the schedule: s * T / (T - 1), so
// the first step sees f(0) = 1 and the last step sees f(T) = 0.
double schedule_position(const AnnealSchedule& schedule, std::int64_t plan_step);

// One entry per training step with n_cot = stochastic rounding of
// batch_size * f, drawn from a generator seeded with `seed`. Requires T >= 2.
MixPlan plan_batches(const AnnealSchedule& schedule, std::int64_t batch_size, std::uint64_t seed,
                     std::int64_t window = kAuditWindow);

nlohmann::json to_json(const StepMix& mix);

// Copy of a CoT record with its steps removed, tagged derived_direct and
// with "#direct" appended to its id. Throws ValidationError when the record
// has no steps.
InstructionRecord derive_direct(const InstructionRecord& record);

}  // namespace doclay
