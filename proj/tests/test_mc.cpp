#include <gtest/gtest.h>

#include <cmath>

#include "concentrix/error.hpp"
#include "concentrix/mc.hpp"
#include "concentrix/models.hpp"

using namespace concentrix;

namespace {

TrialPlan constant_plan(double value, std::size_t trials) {
  TrialPlan p;
  p.statistic = Statistic::custom;
  p.trials = trials;
  p.seed = 3;
  p.tGrid = {value - 1.0, value, value + 1.0};
  p.evaluate = [value](RandomStream&) { return value; };
  return p;
}

McReport gaussian_report(double shift, std::size_t trials) {
  TrialPlan p;
  p.statistic = Statistic::custom;
  p.trials = trials;
  p.seed = 4;
  p.evaluate = [shift](RandomStream& r) { return shift + r.normal(); };
  return run_trials(p, 1);
}

}  // namespace

TEST(RunTrials, ConstantModel) {
  const McReport r = run_trials(constant_plan(2.5, 50), 2);
  EXPECT_EQ(r.mean, 2.5);
  EXPECT_EQ(r.stdError, 0.0);
  ASSERT_EQ(r.tails.size(), 3u);
  EXPECT_EQ(r.tails[0].frequency, 1.0);
  EXPECT_EQ(r.tails[2].frequency, 0.0);
  EXPECT_TRUE(r.tails[1].frequency == 0.0 || r.tails[1].frequency == 1.0);
}

TEST(RunTrials, Errors) {
  TrialPlan p = constant_plan(1.0, 1);
  EXPECT_THROW(run_trials(p), Error);
  TrialPlan none;
  none.statistic = Statistic::spectralNorm;
  EXPECT_THROW(run_trials(none), Error);
}

TEST(RunTrials, ReproducibleAcrossWorkers) {
  const SamplerModel m = gaussian_series_model(make_wigner(12));
  TrialPlan p;
  p.model = &m;
  p.trials = 64;
  p.seed = 99;
  p.tGrid = {5.0, 6.0, 7.0};
  const McReport a = run_trials(p, 1), b = run_trials(p, 4), c = run_trials(p, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stdError, c.stdError);
  for (std::size_t i = 0; i < a.tails.size(); ++i) EXPECT_EQ(a.tails[i].frequency, b.tails[i].frequency);
  p.seed = 100;
  EXPECT_NE(run_trials(p, 1).values, a.values);
}

TEST(RunTrials, TailsDecreaseInT) {
  const SamplerModel m = gaussian_series_model(make_wigner(8));
  TrialPlan p;
  p.model = &m;
  p.trials = 300;
  p.seed = 5;
  for (double t = 2.0; t < 8.0; t += 0.25) p.tGrid.push_back(t);
  const McReport r = run_trials(p, 2);
  for (std::size_t i = 1; i < r.tails.size(); ++i) EXPECT_LE(r.tails[i].frequency, r.tails[i - 1].frequency);
}

TEST(RunTrials, ScalarTailMatchesNormal) {
  const SamplerModel m = gaussian_series_model(SeriesCoefficients({DenseMatrix(1, 1, {1.0})}, Modulator::gaussian));
  TrialPlan p;
  p.model = &m;
  p.trials = 10000;
  p.seed = 6;
  p.tGrid = {0.5, 1.0, 1.5, 2.0, 2.5};
  const McReport r = run_trials(p, 2);
  for (const auto& tail : r.tails) {
    const double exact = std::erfc(tail.t / std::sqrt(2.0));
    EXPECT_LE(tail.wilsonLow, exact) << tail.t;
    EXPECT_GE(tail.wilsonHigh, exact) << tail.t;
  }
}

TEST(Wilson, Examples) {
  const auto [lo0, hi0] = wilson_interval(0, 100);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_NEAR(hi0, 0.0370, 1e-4);
  const auto [lo, hi] = wilson_interval(50, 100);
  EXPECT_NEAR(lo, 0.4038, 1e-4);
  EXPECT_NEAR(hi, 0.5962, 1e-4);
  const auto [lo1, hi1] = wilson_interval(100, 100);
  EXPECT_EQ(hi1, 1.0);
  EXPECT_NEAR(lo1, 1.0 - hi0, 1e-12);
}

TEST(BoundCheck, ExpectationVerdicts) {
  McReport r = gaussian_report(10.0, 400);
  const double se = r.stdError;
  ASSERT_GT(se, 0.0);
  add_bound(r, "far-below", expectation_report("x", r.mean - 10 * se));
  add_bound(r, "above", expectation_report("y", r.mean + se));
  add_bound(r, "just-inside", expectation_report("z", r.mean - 1.5 * se));
  add_bound(r, "lower-ok", expectation_report("w", r.mean - 5 * se), BoundSense::lower);
  add_bound(r, "lower-bad", expectation_report("u", r.mean + 10 * se), BoundSense::lower);
  const auto v = bound_check(r);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_FALSE(v[0].pass);
  EXPECT_TRUE(v[1].pass);
  EXPECT_TRUE(v[2].pass);
  EXPECT_TRUE(v[3].pass);
  EXPECT_FALSE(v[4].pass);
  const auto ratios = bound_ratios(r);
  ASSERT_EQ(ratios.size(), 5u);
  EXPECT_NEAR(ratios[1].second, (r.mean + se) / r.mean, 1e-15);
}

TEST(BoundCheck, TailVerdicts) {
  TrialPlan p;
  p.statistic = Statistic::custom;
  p.trials = 1000;
  p.seed = 7;
  p.tGrid = {0.0, 1.0};
  p.evaluate = [](RandomStream& r) { return r.normal(); };
  McReport r = run_trials(p, 1);
  add_tail_bound(r, "vacuous", 0.0, tail_report("v", 3.0));
  add_tail_bound(r, "too-small", 0.0, tail_report("s", 0.01));
  add_tail_bound(r, "true", 1.0, tail_report("t", std::erfc(1 / std::sqrt(2.0)) / 2));
  EXPECT_THROW(add_tail_bound(r, "off-grid", 0.3, tail_report("o", 1.0)), Error);
  const auto v = bound_check(r);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_TRUE(v[0].pass);
  EXPECT_FALSE(v[1].pass);
  EXPECT_TRUE(v[2].pass);
  ASSERT_TRUE(v[2].t.has_value());
  EXPECT_EQ(*v[2].t, 1.0);
}

TEST(Khintchine, Examples) {
  const SeriesCoefficients w = make_wigner(6);
  for (int q = 1; q <= 3; ++q) {
    const KhintchineResult k = khintchine_check(w, q, 10000, 11, 2);
    EXPECT_TRUE(k.pass) << q;
    EXPECT_EQ(k.constant, khintchine_constant(q));
  }
  const KhintchineResult q1 = khintchine_check(w, 1, 10000, 11, 2);
  EXPECT_EQ(q1.exactSecondMoment, 30.0);
  EXPECT_LE(std::abs(q1.estimate - 30.0), 3 * q1.stdError);
  // One coefficient with signs: even powers are deterministic.
  const DenseMatrix a = DenseMatrix::from_rows({{2, 1}, {1, 0}});
  const SeriesCoefficients one({a}, Modulator::rademacher);
  const KhintchineResult k2 = khintchine_check(one, 2, 100, 12, 1);
  const DenseMatrix a2 = multiply(a, a);
  EXPECT_NEAR(k2.estimate, trace(multiply(a2, a2)), 1e-10);
  EXPECT_EQ(k2.stdError, 0.0);
  EXPECT_THROW(khintchine_check(make_rect_gaussian(2, 3), 1, 10, 1), Error);
  EXPECT_THROW(khintchine_check(w, 5, 10, 1), Error);
}

TEST(Connectivity, Extremes) {
  const auto pts = connectivity_sweep(10, {0.0, 1.0}, 20, 13, 2);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].fraction, 0.0);
  EXPECT_EQ(pts[1].fraction, 1.0);
  EXPECT_THROW(connectivity_sweep(2, {0.5}, 10, 1), Error);
}

TEST(Connectivity, ReproducibleAcrossWorkers) {
  const auto a = connectivity_sweep(40, {0.05, 0.1}, 30, 14, 1);
  const auto b = connectivity_sweep(40, {0.05, 0.1}, 30, 14, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].fraction, b[i].fraction);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}
