#include "doclay/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "doclay/error.hpp"
#include "doclay/rng.hpp"

namespace doclay {

std::string_view to_string(ScheduleShape s) noexcept {
  switch (s) {
    case ScheduleShape::Linear: return "linear";
    case ScheduleShape::Cosine: return "cosine";
    case ScheduleShape::Piecewise: return "piecewise";
  }
  return "";
}

std::optional<ScheduleShape> parse_schedule_shape(std::string_view s) noexcept {
  for (ScheduleShape shape : {ScheduleShape::Linear, ScheduleShape::Cosine, ScheduleShape::Piecewise}) {
    if (to_string(shape) == s) return shape;
  }
  return std::nullopt;
}

AnnealSchedule::AnnealSchedule(std::int64_t total_steps, ScheduleShape shape, std::vector<Knot> knots)
    : total_steps_(total_steps), shape_(shape), knots_(std::move(knots)) {
  if (total_steps_ < 1) {
    throw ValidationError("schedule.total_steps", fmt::format("must be positive, got {}", total_steps_));
  }
}

AnnealSchedule AnnealSchedule::linear(std::int64_t total_steps) { return {total_steps, ScheduleShape::Linear}; }

AnnealSchedule AnnealSchedule::cosine(std::int64_t total_steps) { return {total_steps, ScheduleShape::Cosine}; }

AnnealSchedule AnnealSchedule::piecewise(std::int64_t total_steps, std::vector<Knot> knots) {
  const double t = static_cast<double>(total_steps);
  if (knots.empty() || knots.front().step != 0) knots.insert(knots.begin(), Knot{0, 1});
  if (knots.back().step != t) knots.push_back(Knot{t, 0});
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    const std::string where = fmt::format("schedule.knots[{}]", i);
    if (!(k.step >= 0 && k.step <= t)) throw ValidationError(where, fmt::format("step {} outside [0, {}]", k.step, t));
    if (!(k.fraction >= 0 && k.fraction <= 1)) {
      throw ValidationError(where, fmt::format("fraction {} outside [0, 1]", k.fraction));
    }
    if (i > 0 && !(k.step > knots[i - 1].step)) throw ValidationError(where, "steps must increase strictly");
    if (i > 0 && k.fraction > knots[i - 1].fraction) throw ValidationError(where, "fractions must not increase");
  }
  if (knots.front().fraction != 1) throw ValidationError("schedule.knots", "fraction at step 0 must be 1");
  if (knots.back().fraction != 0) throw ValidationError("schedule.knots", "fraction at the last step must be 0");
  return {total_steps, ScheduleShape::Piecewise, std::move(knots)};
}

double AnnealSchedule::cot_fraction(double step) const {
  const double t = static_cast<double>(total_steps_);
  if (!(step >= 0 && step <= t)) throw RangeError(fmt::format("step {} outside [0, {}]", step, t));
  if (step == 0) return 1.0;
  if (step == t) return 0.0;
  switch (shape_) {
    case ScheduleShape::Linear:
      return 1.0 - step / t;
    case ScheduleShape::Cosine:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * step / t));
    case ScheduleShape::Piecewise: {
      auto hi = std::upper_bound(knots_.begin(), knots_.end(), step,
                                 [](double s, const Knot& k) { return s < k.step; });
      auto lo = hi - 1;
      const double u = (step - lo->step) / (hi->step - lo->step);
      return lo->fraction + u * (hi->fraction - lo->fraction);
    }
  }
  return 0.0;
}

double schedule_position(const AnnealSchedule& schedule, std::int64_t plan_step) {
  const std::int64_t t = schedule.total_steps();
  if (plan_step < 0 || plan_step >= t) throw RangeError(fmt::format("plan step {} outside [0, {})", plan_step, t));
  if (plan_step == t - 1) return static_cast<double>(t);
  return static_cast<double>(plan_step) * static_cast<double>(t) / static_cast<double>(t - 1);
}

double MixPlan::max_window_deviation() const noexcept {
  double worst = 0;
  for (const WindowAudit& w : audit) worst = std::max(worst, std::abs(w.realized - w.expected));
  return worst;
}

MixPlan plan_batches(const AnnealSchedule& schedule, std::int64_t batch_size, std::uint64_t seed,
                     std::int64_t window) {
  if (batch_size < 1) throw ValidationError("schedule.batch_size", fmt::format("must be positive, got {}", batch_size));
  if (window < 1) throw ValidationError("window", "must be positive");
  const std::int64_t t = schedule.total_steps();
  if (t < 2) throw ValidationError("schedule.total_steps", "a plan needs at least 2 steps");

  MixPlan plan;
  plan.seed = seed;
  plan.batch_size = batch_size;
  plan.window = std::min(window, t);
  plan.steps.reserve(static_cast<std::size_t>(t));

  Rng rng(seed);
  std::vector<double> expected(static_cast<std::size_t>(t));
  for (std::int64_t s = 0; s < t; ++s) {
    const double f = schedule.cot_fraction(schedule_position(schedule, s));
    expected[static_cast<std::size_t>(s)] = f;
    const double target = static_cast<double>(batch_size) * f;
    const double base = std::floor(target);
    auto n_cot = static_cast<std::int64_t>(base);
    if (rng.uniform() < target - base) ++n_cot;
    n_cot = std::clamp<std::int64_t>(n_cot, 0, batch_size);
    plan.steps.push_back({s, n_cot, batch_size - n_cot});
  }

  // Sliding-window audit via prefix sums.
  std::vector<double> cot_prefix(static_cast<std::size_t>(t) + 1, 0), f_prefix(static_cast<std::size_t>(t) + 1, 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(t); ++i) {
    cot_prefix[i + 1] = cot_prefix[i] + static_cast<double>(plan.steps[i].n_cot);
    f_prefix[i + 1] = f_prefix[i] + expected[i];
  }
  const auto w = static_cast<std::size_t>(plan.window);
  for (std::size_t start = 0; start + w <= static_cast<std::size_t>(t); ++start) {
    plan.audit.push_back({static_cast<std::int64_t>(start),
                          (cot_prefix[start + w] - cot_prefix[start]) / static_cast<double>(w * batch_size),
                          (f_prefix[start + w] - f_prefix[start]) / static_cast<double>(w)});
  }
  return plan;
}

nlohmann::json to_json(const StepMix& mix) {
  return {{"step", mix.step}, {"n_cot", mix.n_cot}, {"n_direct", mix.n_direct}};
}

InstructionRecord derive_direct(const InstructionRecord& record) {
  if (!record.cot_steps) {
    throw ValidationError("cot_steps", fmt::format("record '{}' has no reasoning steps to strip", record.record_id));
  }
  InstructionRecord out = record;
  out.cot_steps.reset();
  out.record_id += "#direct";
  out.metadata["derived_direct"] = true;
  return out;
}

}  // namespace doclay
