#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "doclay/anneal.hpp"
#include "doclay/error.hpp"
#include "doclay/rng.hpp"

using namespace doclay;

namespace {

std::vector<AnnealSchedule> all_shapes(std::int64_t t) {
  return {AnnealSchedule::linear(t), AnnealSchedule::cosine(t),
          AnnealSchedule::piecewise(t, {{0.25 * double(t), 0.9}, {0.5 * double(t), 0.3}, {0.8 * double(t), 0.3}})};
}

TEST(Schedule, ExactEndpointsForEveryShape) {
  for (std::int64_t t : {1, 2, 7, 1000, 123457}) {
    for (const AnnealSchedule& s : all_shapes(t)) {
      EXPECT_EQ(s.cot_fraction(0), 1.0) << to_string(s.shape());
      EXPECT_EQ(s.cot_fraction(static_cast<double>(t)), 0.0) << to_string(s.shape());
    }
  }
}

TEST(Schedule, ClosedForms) {
  const auto lin = AnnealSchedule::linear(1000);
  EXPECT_DOUBLE_EQ(lin.cot_fraction(250), 0.75);
  const auto cos = AnnealSchedule::cosine(1000);
  EXPECT_NEAR(cos.cot_fraction(500), 0.5, 1e-15);
  EXPECT_NEAR(cos.cot_fraction(250), 0.5 * (1 + std::cos(std::numbers::pi / 4)), 1e-15);
  const auto pw = AnnealSchedule::piecewise(100, {{50, 0.2}});
  EXPECT_DOUBLE_EQ(pw.cot_fraction(25), 0.6);
  EXPECT_DOUBLE_EQ(pw.cot_fraction(75), 0.1);
  EXPECT_EQ(pw.knots().size(), 3u);
}

TEST(Schedule, MonotoneNonIncreasing) {
  Rng rng(1);
  const std::int64_t t = 1000;
  const auto shapes = all_shapes(t);
  for (int i = 0; i < 1000; ++i) {
    const AnnealSchedule& s = shapes[static_cast<std::size_t>(rng.uniform_int(0, 2))];
    double a = rng.uniform() * double(t);
    double b = rng.uniform() * double(t);
    if (a > b) std::swap(a, b);
    ASSERT_GE(s.cot_fraction(a), s.cot_fraction(b)) << to_string(s.shape()) << " " << a << " " << b;
  }
}

TEST(Schedule, RangeAndValidation) {
  const auto lin = AnnealSchedule::linear(10);
  EXPECT_THROW(lin.cot_fraction(-0.5), RangeError);
  EXPECT_THROW(lin.cot_fraction(10.5), RangeError);
  EXPECT_THROW(AnnealSchedule::linear(0), ValidationError);
  EXPECT_THROW(AnnealSchedule::piecewise(10, {{5, 0.5}, {4, 0.4}}), ValidationError);
  EXPECT_THROW(AnnealSchedule::piecewise(10, {{3, 0.4}, {6, 0.6}}), ValidationError);
  EXPECT_THROW(AnnealSchedule::piecewise(10, {{0, 0.8}}), ValidationError);
  EXPECT_THROW(AnnealSchedule::piecewise(10, {{12, 0.5}}), ValidationError);
  EXPECT_EQ(parse_schedule_shape("cosine"), ScheduleShape::Cosine);
  EXPECT_FALSE(parse_schedule_shape("step").has_value());
}

TEST(Plan, EndpointsAndBatchSums) {
  const MixPlan plan = plan_batches(AnnealSchedule::linear(1000), 64, 7);
  ASSERT_EQ(plan.steps.size(), 1000u);
  EXPECT_EQ(plan.steps.front(), (StepMix{0, 64, 0}));
  EXPECT_EQ(plan.steps.back(), (StepMix{999, 0, 64}));
  for (const StepMix& m : plan.steps) {
    ASSERT_EQ(m.n_cot + m.n_direct, 64);
    ASSERT_GE(m.n_cot, 0);
  }
  EXPECT_EQ(plan.audit.size(), 951u);
}

TEST(Plan, StochasticRoundingStaysWithinOne) {
  const auto sched = AnnealSchedule::cosine(500);
  const MixPlan plan = plan_batches(sched, 10, 3);
  for (const StepMix& m : plan.steps) {
    const double target = 10 * sched.cot_fraction(schedule_position(sched, m.step));
    ASSERT_GE(double(m.n_cot), std::floor(target));
    ASSERT_LE(double(m.n_cot), std::ceil(target));
  }
}

TEST(Plan, ExpectedCountsMatchTheSchedule) {
  const auto sched = AnnealSchedule::linear(1000);
  double want = 0;
  for (std::int64_t s = 0; s < 1000; ++s) want += 64 * sched.cot_fraction(schedule_position(sched, s));
  double got = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    for (const StepMix& m : plan_batches(sched, 64, static_cast<std::uint64_t>(seed)).steps) got += double(m.n_cot);
  }
  EXPECT_NEAR(got / seeds, want, 0.01 * want);
}

TEST(Plan, AuditMatchesDirectWindowSums) {
  const auto sched = AnnealSchedule::cosine(300);
  const MixPlan plan = plan_batches(sched, 32, 11, 50);
  ASSERT_EQ(plan.audit.size(), 251u);
  for (const WindowAudit& w : plan.audit) {
    double cot = 0, f = 0;
    for (std::int64_t s = w.start; s < w.start + 50; ++s) {
      cot += double(plan.steps[static_cast<std::size_t>(s)].n_cot);
      f += sched.cot_fraction(schedule_position(sched, s));
    }
    ASSERT_NEAR(w.realized, cot / (50.0 * 32), 1e-12);
    ASSERT_NEAR(w.expected, f / 50, 1e-12);
  }
}

TEST(Plan, WindowsTrackTheScheduleAcrossSeeds) {
  const auto sched = AnnealSchedule::linear(1000);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ASSERT_LE(plan_batches(sched, 64, seed).max_window_deviation(), 0.02) << seed;
  }
}

TEST(Plan, DeterministicPerSeed) {
  const auto sched = AnnealSchedule::cosine(1000);
  EXPECT_EQ(plan_batches(sched, 64, 5).steps, plan_batches(sched, 64, 5).steps);
  EXPECT_NE(plan_batches(sched, 64, 5).steps, plan_batches(sched, 64, 6).steps);
}

TEST(Plan, Preconditions) {
  EXPECT_THROW(plan_batches(AnnealSchedule::linear(1), 64, 0), ValidationError);
  EXPECT_THROW(plan_batches(AnnealSchedule::linear(10), 0, 0), ValidationError);
  EXPECT_THROW(schedule_position(AnnealSchedule::linear(10), 10), RangeError);
  EXPECT_EQ(schedule_position(AnnealSchedule::linear(10), 9), 10.0);
  EXPECT_EQ(schedule_position(AnnealSchedule::linear(10), 0), 0.0);
  const MixPlan two = plan_batches(AnnealSchedule::cosine(2), 4, 0);
  EXPECT_EQ(two.steps[0].n_cot, 4);
  EXPECT_EQ(two.steps[1].n_cot, 0);
}

TEST(DeriveDirect, StripsStepsAndTags) {
  InstructionRecord r;
  r.record_id = "p:0:GeometricAnalysis";
  r.task = TaskKind::GeometricAnalysis;
  r.final_answer = "left";
  r.cot_steps = std::vector<CotStep>{{1, "x", {}}};
  const InstructionRecord d = derive_direct(r);
  EXPECT_FALSE(d.cot_steps);
  EXPECT_EQ(d.record_id, "p:0:GeometricAnalysis#direct");
  EXPECT_EQ(d.final_answer, "left");
  EXPECT_TRUE(d.metadata.at("derived_direct").get<bool>());
  EXPECT_THROW(derive_direct(d), ValidationError);
}

TEST(StepMix, Json) {
  EXPECT_EQ(to_json(StepMix{3, 10, 54}).dump(), R"({"n_cot":10,"n_direct":54,"step":3})");
}

}  // namespace
