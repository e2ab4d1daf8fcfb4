#include "concentrix/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "concentrix/error.hpp"
#include "concentrix/summation.hpp"

namespace concentrix {

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::spectralNorm: return "spectralNorm";
    case Statistic::lambdaMax: return "lambdaMax";
    case Statistic::lambdaMin: return "lambdaMin";
    case Statistic::deviationNorm: return "deviationNorm";
    case Statistic::custom: return "custom";
  }
  return "unknown";
}

const TailEstimate* McReport::tail_at(double t) const {
  for (const auto& tail : tails)
    if (tail.t == t) return &tail;
  return nullptr;
}

unsigned default_workers() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CONCENTRIX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& f) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  // Keep the exception from the lowest index so failures are reproducible.
  std::mutex mu;
  std::size_t err_index = count;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

namespace {

double evaluate_statistic(const TrialPlan& plan, RandomStream& rng) {
  if (plan.statistic == Statistic::custom) {
    if (!plan.evaluate) fail(ErrorCode::InvalidInput, "custom plan without an evaluator");
    return plan.evaluate(rng);
  }
  if (!plan.model) fail(ErrorCode::InvalidInput, "plan has no model");
  switch (plan.statistic) {
    case Statistic::spectralNorm:
      return spectral_norm(draw(*plan.model, rng));
    case Statistic::lambdaMax:
      return lambda_max(SymmetricMatrix(draw(*plan.model, rng)));
    case Statistic::lambdaMin:
      return lambda_min(SymmetricMatrix(draw(*plan.model, rng)));
    case Statistic::deviationNorm:
      return spectral_norm(sample_estimator(*plan.model, plan.samplesPerTrial, rng) - plan.model->target);
    case Statistic::custom:
      break;
  }
  fail(ErrorCode::InvalidInput, "unknown statistic");
}

}  // namespace

McReport run_trials(const TrialPlan& plan, unsigned workers) {
  if (plan.trials < 2) fail(ErrorCode::TooFewSamples, "need at least two trials");
  McReport report;
  report.statistic = plan.statistic == Statistic::custom && !plan.label.empty()
                         ? plan.label
                         : to_string(plan.statistic);
  report.trials = plan.trials;
  report.seed = plan.seed;
  report.values.assign(plan.trials, 0.0);
  const RandomStream root(plan.seed);
  parallel_for(plan.trials, workers, [&](std::size_t i) {
    RandomStream rng = root.split(i);
    report.values[i] = evaluate_statistic(plan, rng);
  });
  const double n = static_cast<double>(plan.trials);
  report.mean = pairwise_sum(report.values) / n;
  std::vector<double> sq(report.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double c = report.values[i] - report.mean;
    sq[i] = c * c;
  }
  report.stdError = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  std::vector<double> grid = plan.tGrid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double t : grid) {
    const auto k = static_cast<std::size_t>(
        std::count_if(report.values.begin(), report.values.end(), [t](double x) { return x >= t; }));
    const auto [lo, hi] = wilson_interval(k, plan.trials);
    report.tails.push_back({t, static_cast<double>(k) / n, lo, hi});
  }
  return report;
}

void add_bound(McReport& report, std::string name, BoundReport bound, BoundSense sense) {
  report.bounds.push_back({std::move(name), std::move(bound), sense, std::nullopt});
}

void add_tail_bound(McReport& report, std::string name, double t, BoundReport bound) {
  if (!report.tail_at(t)) fail(ErrorCode::InvalidInput, "threshold not in the report grid");
  report.bounds.push_back({std::move(name), std::move(bound), BoundSense::upper, t});
}

std::vector<std::pair<std::string, double>> bound_ratios(const McReport& report) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& b : report.bounds)
    if (b.bound.kind == BoundKind::expectation)
      out.emplace_back(b.name, report.mean != 0.0 ? b.bound.value / report.mean
                                                  : std::numeric_limits<double>::infinity());
  return out;
}

std::vector<Verdict> bound_check(const McReport& report) {
  std::vector<Verdict> out;
  for (const auto& b : report.bounds) {
    Verdict v;
    v.name = b.name;
    v.t = b.t;
    if (b.bound.kind == BoundKind::expectation) {
      if (b.sense == BoundSense::upper) {
        v.pass = report.mean <= b.bound.value + 2.0 * report.stdError;
        v.detail = "mean <= bound + 2 stderr";
      } else {
        v.pass = report.mean >= b.bound.value - 2.0 * report.stdError;
        v.detail = "mean >= bound - 2 stderr";
      }
    } else {
      const TailEstimate* tail = b.t ? report.tail_at(*b.t) : nullptr;
      if (!tail) {
        v.pass = false;
        v.detail = "no tail estimate at threshold";
      } else {
        v.pass = tail->wilsonLow <= b.bound.value;
        v.detail = "wilson low <= clamped bound";
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

KhintchineResult khintchine_check(const SeriesCoefficients& series, int q, std::size_t trials,
                                  std::uint64_t seed, unsigned workers) {
  if (!series.symmetric()) fail(ErrorCode::InvalidInput, "Khintchine check needs symmetric coefficients");
  if (q < 1 || q > 4) fail(ErrorCode::ParameterRange, "q must lie in 1..4");
  if (trials < 2) fail(ErrorCode::TooFewSamples, "need at least two trials");
  std::vector<double> values(trials);
  const RandomStream root(seed);
  parallel_for(trials, workers, [&](std::size_t i) {
    RandomStream rng = root.split(i);
    const auto s = sym_eigvals(SymmetricMatrix(sample_series(series, rng)));
    double t = 0.0;
    for (double l : s.eigenvalues) t += std::pow(l, 2 * q);
    values[i] = t;
  });
  KhintchineResult r;
  r.q = q;
  const double n = static_cast<double>(trials);
  r.estimate = pairwise_sum(values) / n;
  std::vector<double> sq(trials);
  for (std::size_t i = 0; i < trials; ++i) sq[i] = (values[i] - r.estimate) * (values[i] - r.estimate);
  r.stdError = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  const auto var = sym_eigvals(SymmetricMatrix(series_gram_rows(series)));
  double trq = 0.0, tr1 = 0.0;
  for (double l : var.eigenvalues) {
    trq += std::pow(l, q);
    tr1 += l;
  }
  r.constant = khintchine_constant(q);
  r.rhs = r.constant * trq;
  r.exactSecondMoment = tr1;
  r.pass = r.estimate <= r.rhs + 3.0 * r.stdError;
  return r;
}

bool is_connected(const SymmetricMatrix& laplacian) {
  const auto s = sym_eigvals(laplacian);
  if (s.eigenvalues.size() < 2) return true;
  return s.eigenvalues[s.eigenvalues.size() - 2] > 1e-8;
}

std::vector<ConnectivityPoint> connectivity_sweep(std::size_t n, const std::vector<double>& pList,
                                                  std::size_t trials, std::uint64_t seed,
                                                  unsigned workers) {
  if (n < 3) fail(ErrorCode::ParameterRange, "need n >= 3");
  if (trials == 0) fail(ErrorCode::TooFewSamples, "need at least one trial");
  std::vector<ConnectivityPoint> out;
  for (std::size_t j = 0; j < pList.size(); ++j) {
    const double p = pList[j];
    std::vector<char> connected(trials, 0);
    const RandomStream root(seed, j);
    parallel_for(trials, workers, [&](std::size_t i) {
      RandomStream rng = root.split(i);
      connected[i] = is_connected(er_laplacian(n, p, rng));
    });
    const auto k = static_cast<std::size_t>(std::count(connected.begin(), connected.end(), 1));
    const auto [lo, hi] = wilson_interval(k, trials);
    out.push_back({p, static_cast<double>(k) / static_cast<double>(trials), lo, hi});
  }
  return out;
}

}  // namespace concentrix
