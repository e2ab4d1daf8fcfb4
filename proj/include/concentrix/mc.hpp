#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "concentrix/bounds.hpp"
#include "concentrix/models.hpp"
#include "concentrix/rng.hpp"

namespace concentrix {

enum class Statistic { spectralNorm, lambdaMax, lambdaMin, deviationNorm, custom };
std::string to_string(Statistic s);

struct TrialPlan {
  const SamplerModel* model = nullptr;
  Statistic statistic = Statistic::spectralNorm;
  std::size_t samplesPerTrial = 1;  // n in the averaged estimator, for deviationNorm
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::vector<double> tGrid;
  /// Used instead of the model when statistic is custom.
  std::function<double(RandomStream&)> evaluate;
  std::string label;  // statistic name written to reports for custom plans
};

struct TailEstimate {
  double t = 0.0;
  double frequency = 0.0;
  double wilsonLow = 0.0;
  double wilsonHigh = 0.0;
};

enum class BoundSense { upper, lower };

struct NamedBound {
  std::string name;
  BoundReport bound;
  BoundSense sense = BoundSense::upper;
  std::optional<double> t;  // threshold for tail bounds
};

struct Verdict {
  std::string name;
  std::optional<double> t;
  bool pass = false;
  std::string detail;
};

struct McReport {
  std::string statistic;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double stdError = 0.0;
  std::vector<TailEstimate> tails;
  std::vector<NamedBound> bounds;
  std::vector<double> values;  // per-trial statistic, not serialized

  const TailEstimate* tail_at(double t) const;
};

/// Worker count from CONCENTRIX_THREADS, else hardware concurrency.
unsigned default_workers();

/// Runs f(i) for i in [0, count) over workers threads. f must write only its own slot.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& f);

/// 95% Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

McReport run_trials(const TrialPlan& plan, unsigned workers = default_workers());

void add_bound(McReport& report, std::string name, BoundReport bound,
               BoundSense sense = BoundSense::upper);
void add_tail_bound(McReport& report, std::string name, double t, BoundReport bound);

/// Ratio bound/mean per expectation bound, in report order.
std::vector<std::pair<std::string, double>> bound_ratios(const McReport& report);
std::vector<Verdict> bound_check(const McReport& report);

struct KhintchineResult {
  int q = 1;
  double estimate = 0.0;
  double stdError = 0.0;
  double constant = 1.0;
  double rhs = 0.0;
  /// E tr Y^2 computed exactly, for q = 1.
  double exactSecondMoment = 0.0;
  bool pass = false;
};

KhintchineResult khintchine_check(const SeriesCoefficients& series, int q, std::size_t trials,
                                  std::uint64_t seed, unsigned workers = default_workers());

struct ConnectivityPoint {
  double p = 0.0;
  double fraction = 0.0;
  double wilsonLow = 0.0;
  double wilsonHigh = 0.0;
};

/// Connected iff the second-smallest Laplacian eigenvalue exceeds 1e-8.
bool is_connected(const SymmetricMatrix& laplacian);
std::vector<ConnectivityPoint> connectivity_sweep(std::size_t n, const std::vector<double>& pList,
                                                  std::size_t trials, std::uint64_t seed,
                                                  unsigned workers = default_workers());

}  // namespace concentrix
