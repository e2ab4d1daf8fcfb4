#include "concentrix/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "concentrix/error.hpp"
#include "concentrix/mfunc.hpp"
#include "eigen_bridge.hpp"

namespace concentrix {

namespace {

// Fixed inputs (matrices, point clouds) come from this seed so that --seed only
// moves the Monte Carlo draws.
constexpr std::uint64_t kFixtureSeed = 0x636f6e63656e7472ULL;

std::size_t pick(std::size_t value, std::size_t fallback) { return value ? value : fallback; }

double first_eps(const ExperimentConfig& c, double fallback = 0.5) {
  return c.eps.empty() ? fallback : c.eps.front();
}

Check band(std::string name, double value, std::optional<double> lo, std::optional<double> hi,
           std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.lo = lo;
  c.hi = hi;
  c.pass = std::isfinite(value) && (!lo || value >= *lo) && (!hi || value <= *hi);
  c.detail = std::move(detail);
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

DenseMatrix gaussian_matrix(std::size_t r, std::size_t c, RandomStream& rng) {
  DenseMatrix m(r, c);
  for (double& x : m.entries()) x = rng.normal();
  return m;
}

/// r x k matrix with orthonormal columns.
DenseMatrix orthonormal(std::size_t r, std::size_t k, RandomStream& rng) {
  const DenseMatrix g = gaussian_matrix(r, k, rng);
  Eigen::HouseholderQR<detail::RowMat> qr(detail::view(g));
  detail::RowMat q = qr.householderQ() * detail::RowMat::Identity(static_cast<Eigen::Index>(r),
                                                                  static_cast<Eigen::Index>(k));
  return detail::to_dense(q);
}

/// Rank-k matrix with k unit singular values, so srank = k and norm 1.
DenseMatrix low_rank(std::size_t r, std::size_t c, std::size_t k, RandomStream& rng) {
  const DenseMatrix u = orthonormal(r, k, rng);
  const DenseMatrix v = orthonormal(c, k, rng);
  return multiply(u, v.transpose());
}

void check_trials(std::size_t trials) {
  if (trials < 2 || trials > kMaxTrials) fail(ErrorCode::ParameterRange, "trials must lie in [2, 1e6]");
}

void check_dim(std::size_t d) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::ParameterRange, "dimension must lie in [1, 2048]");
}

std::vector<double> scaled_grid(const ExperimentConfig& c, double base, std::vector<double> factors) {
  if (!c.t.empty()) return c.t;
  for (double& f : factors) f *= base;
  return factors;
}

// Gaussian series --------------------------------------------------------------

ExperimentResult run_wigner(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.dim, 100), trials = pick(c.trials, 200);
  check_dim(d);
  check_trials(trials);
  if (d < 2) fail(ErrorCode::ParameterRange, "Wigner needs d >= 2");
  const SeriesCoefficients series = make_wigner(d);
  const double v = series_variance(series).v;
  const BoundReport bound = series_expectation_bound(v, d, d);

  TrialPlan plan;
  plan.statistic = Statistic::custom;
  plan.label = "spectralNorm";
  plan.trials = trials;
  plan.seed = c.seed;
  plan.tGrid = scaled_grid(c, bound.value, {1.0, 1.1, 1.2});
  plan.evaluate = [&series](RandomStream& rng) {
    return spectral_norm(SymmetricMatrix(sample_series(series, rng)));
  };
  McReport rep = run_trials(plan, workers);
  add_bound(rep, "series-expectation", bound);
  add_bound(rep, "series-expectation-hermitian", series_expectation_bound(v, d, d, true));
  for (const auto& tail : rep.tails) add_tail_bound(rep, "series-tail", tail.t, series_tail_bound(v, d, d, tail.t));

  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"trials", double(trials)}, {"v", v}};
  r.checks.push_back(band("bound-over-mean", bound.value / rep.mean, 1.0, 2.5));
  r.checks.push_back(band("mean-over-sqrt-d", rep.mean / std::sqrt(double(d)), 1.7, 2.05));
  r.reports.push_back({"norm", std::move(rep)});
  return r;
}

ExperimentResult run_rect_gaussian(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d1 = pick(c.rows, pick(c.dim, 100)), d2 = pick(c.cols, d1);
  const std::size_t trials = pick(c.trials, 200);
  check_dim(d1);
  check_dim(d2);
  check_trials(trials);
  const SeriesCoefficients series = make_rect_gaussian(d1, d2);
  const double v = series_variance(series).v;
  const double vWeak = weak_variance_approx(series);
  const BoundReport bound = series_expectation_bound(v, d1, d2);
  // E|Z| <= sqrt(d1) + sqrt(d2), so thresholds above that make the concentration check rigorous.
  const double ref = std::sqrt(double(d1)) + std::sqrt(double(d2));
  const std::vector<double> offsets = {0.5, 1.0, 1.5, 2.0};

  const SamplerModel model = gaussian_series_model(series);
  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::spectralNorm;
  plan.trials = trials;
  plan.seed = c.seed;
  for (double s : offsets) plan.tGrid.push_back(ref + s);
  for (double f : {1.0, 1.1}) plan.tGrid.push_back(f * bound.value);
  McReport rep = run_trials(plan, workers);
  add_bound(rep, "series-expectation", bound);
  for (double s : offsets) add_tail_bound(rep, "gauss-concentration", ref + s, gauss_concentration_tail(vWeak, s));
  for (double f : {1.0, 1.1})
    add_tail_bound(rep, "series-tail", f * bound.value, series_tail_bound(v, d1, d2, f * bound.value));

  std::vector<double> sq(rep.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = rep.values[i] * rep.values[i];
  double second = 0.0;
  for (double x : sq) second += x;
  second /= double(sq.size());
  const auto [lo2, hi2] = series_second_moment_range(v, d1, d2);

  ExperimentResult r;
  r.parameters = {{"rows", double(d1)}, {"cols", double(d2)}, {"trials", double(trials)},
                  {"v", v}, {"vWeak", vWeak}};
  r.checks.push_back(band("mean-in-range", rep.mean, 0.9 * ref, bound.value, "[0.9 (sqrt d1 + sqrt d2), bound]"));
  r.checks.push_back(band("second-moment-range", second, lo2, hi2));
  r.checks.push_back(band("weak-variance", vWeak, 1.0 - 1e-8, 1.0 + 1e-8));
  r.reports.push_back({"norm", std::move(rep)});
  return r;
}

ExperimentResult run_signed(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d1 = pick(c.rows, pick(c.dim, 100)), d2 = pick(c.cols, d1);
  const std::size_t trials = pick(c.trials, 200);
  check_dim(d1);
  check_dim(d2);
  check_trials(trials);
  RandomStream fixture(kFixtureSeed, 3);
  const DenseMatrix b = gaussian_matrix(d1, d2, fixture);
  const VarianceStats vs = signed_matrix_variance(b);
  const SeriesCoefficients series = make_signed(b);
  const double vSeries = series_variance(series).v;
  const BoundReport bound = series_expectation_bound(vs.v, d1, d2);

  const SamplerModel model = gaussian_series_model(series);
  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::spectralNorm;
  plan.trials = trials;
  plan.seed = c.seed;
  plan.tGrid = scaled_grid(c, bound.value, {1.0, 1.25});
  McReport rep = run_trials(plan, workers);
  add_bound(rep, "series-expectation", bound);
  for (const auto& tail : rep.tails)
    add_tail_bound(rep, "series-tail", tail.t, series_tail_bound(vs.v, d1, d2, tail.t));

  ExperimentResult r;
  r.parameters = {{"rows", double(d1)}, {"cols", double(d2)}, {"trials", double(trials)},
                  {"v", vs.v}, {"L", vs.L.value_or(0.0)}};
  r.checks.push_back(band("variance-agreement", std::abs(vSeries - vs.v) / vs.v, std::nullopt, 1e-12,
                          "series variance vs row/column maxima"));
  r.reports.push_back({"norm", std::move(rep)});
  return r;
}

ExperimentResult run_toeplitz(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.dim, 256), trials = pick(c.trials, 200);
  check_dim(d);
  check_trials(trials);
  const SeriesCoefficients series = make_toeplitz(d);
  const double v = series_variance(series).v;
  const BoundReport bound = series_expectation_bound(v, d, d);
  const SamplerModel model = gaussian_series_model(series);
  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::spectralNorm;
  plan.trials = trials;
  plan.seed = c.seed;
  McReport rep = run_trials(plan, workers);
  add_bound(rep, "series-expectation", bound);
  const double scale = std::sqrt(2.0 * double(d) * std::log(2.0 * double(d)));

  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"trials", double(trials)}, {"v", v}};
  r.checks.push_back(band("mean-over-sqrt-2d-ln-2d", rep.mean / scale, 0.70, 1.05));
  r.reports.push_back({"norm", std::move(rep)});
  return r;
}

ExperimentResult run_maxqp(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.dim, 32), trials = pick(c.trials, 200);
  constexpr std::size_t kBlocks = 16;
  check_dim(d);
  check_trials(trials);
  RandomStream fixture(kFixtureSeed, 5);
  std::vector<DenseMatrix> blocks;
  for (std::size_t k = 0; k < kBlocks; ++k)
    blocks.push_back((1.0 / std::sqrt(double(kBlocks))) * orthonormal(d, d, fixture));
  check_maxqp_constraints(blocks);
  const double alpha = maxqp_alpha(d, d);
  const double v = series_variance(SeriesCoefficients(blocks, Modulator::rademacher)).v;

  const SamplerModel model = maxqp_model(blocks);
  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::spectralNorm;
  plan.trials = trials;
  plan.seed = c.seed;
  McReport rep = run_trials(plan, workers);
  BoundReport scaled = series_expectation_bound(v, d, d);
  scaled.value *= alpha;
  scaled.raw *= alpha;
  scaled.formulaId = "maxqp-rounding";
  add_bound(rep, "rounded-norm", scaled);

  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"blocks", double(kBlocks)}, {"trials", double(trials)},
                  {"alpha", alpha}, {"v", v}};
  r.checks.push_back(band("mean-rounded-norm", rep.mean, std::nullopt, 1.0, "E|alpha Z| <= 1"));
  r.reports.push_back({"norm", std::move(rep)});
  return r;
}

// Chernoff ---------------------------------------------------------------------

ExperimentResult run_chernoff_submatrix(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.rows, 100), n = pick(c.cols, 300), trials = pick(c.trials, 200);
  check_dim(d);
  check_dim(n);
  check_trials(trials);
  const double p = double(n) / 10.0;
  RandomStream fixture(kFixtureSeed, 6);
  const DenseMatrix b = gaussian_matrix(d, n, fixture);
  std::vector<SymmetricMatrix> means;
  double colmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    DenseMatrix col(d, 1);
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      col(i, 0) = b(i, k);
      sq += b(i, k) * b(i, k);
    }
    colmax = std::max(colmax, sq);
    means.push_back(SymmetricMatrix((p / double(n)) * gram_rows(col)));
  }
  const ChernoffStats s = chernoff_stats(means, colmax);
  const auto [lo1, hi1] = chernoff_expectation(s, 1.0);
  const BoundReport hiOpt = master_bound_minimize({CgfKind::chernoff, s.muMax, s.L, false}, double(d));
  const BoundReport loOpt = master_bound_minimize({CgfKind::chernoff, s.muMin, s.L, true}, double(d));

  auto plan_for = [&](bool top) {
    TrialPlan plan;
    plan.statistic = Statistic::custom;
    plan.label = top ? "lambdaMax" : "lambdaMin";
    plan.trials = trials;
    plan.seed = c.seed;
    plan.evaluate = [&b, p, top](RandomStream& rng) {
      const auto ev = sym_eigvals(SymmetricMatrix(gram_rows(column_submatrix(b, p, rng)))).eigenvalues;
      return top ? ev.front() : ev.back();
    };
    return plan;
  };
  McReport top = run_trials(plan_for(true), workers);
  add_bound(top, "chernoff-upper", hi1);
  add_bound(top, "chernoff-upper-optimized", hiOpt);
  McReport bottom = run_trials(plan_for(false), workers);
  add_bound(bottom, "chernoff-lower", lo1, BoundSense::lower);
  add_bound(bottom, "chernoff-lower-optimized", loOpt, BoundSense::lower);

  ExperimentResult r;
  r.parameters = {{"rows", double(d)}, {"cols", double(n)}, {"p", p}, {"trials", double(trials)},
                  {"muMin", s.muMin}, {"muMax", s.muMax}, {"L", s.L}};
  r.reports.push_back({"lambdaMax", std::move(top)});
  r.reports.push_back({"lambdaMin", std::move(bottom)});
  return r;
}

ExperimentResult run_coupon(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.dim, 16), trials = pick(c.trials, 10000);
  check_dim(d);
  check_trials(trials);
  if (d < 2) fail(ErrorCode::ParameterRange, "coupon collector needs d >= 2");
  const double dlnd = double(d) * std::log(double(d));
  std::vector<std::size_t> ns;
  for (int k = 0; k <= 15; ++k) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round((0.5 + 0.1 * k) * dlnd)));
    if (ns.empty() || n != ns.back()) ns.push_back(n);
  }

  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"trials", double(trials)}, {"dLogD", dlnd}};
  std::vector<double> fraction;
  std::size_t mismatches = 0;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const std::size_t n = ns[j];
    TrialPlan plan;
    plan.statistic = Statistic::custom;
    plan.label = "lambdaMin";
    plan.trials = trials;
    plan.seed = mix(c.seed, j);
    plan.tGrid = {0.5};
    plan.evaluate = [d, n](RandomStream& rng) {
      std::vector<double> diag(d, 0.0);
      for (std::size_t k = 0; k < n; ++k) diag[rng.below(d)] += double(d);
      return lambda_min(SymmetricMatrix::diagonal(diag));
    };
    McReport rep = run_trials(plan, workers);
    // E Y = n I and each summand has norm d.
    const ChernoffStats s{double(n), double(n), double(d), d};
    const BoundReport opt = master_bound_minimize({CgfKind::chernoff, s.muMin, s.L, true}, double(d));
    add_bound(rep, "chernoff-lower", chernoff_expectation(s, 1.0).first, BoundSense::lower);
    add_bound(rep, "chernoff-lower-optimized", opt, BoundSense::lower);
    if ((opt.value > 0.0) != (double(n) > dlnd)) ++mismatches;
    fraction.push_back(rep.tail_at(0.5)->frequency);
    r.reports.push_back({"n=" + std::to_string(n), std::move(rep)});
  }
  double crossing = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (fraction[j] < 0.5) continue;
    if (j == 0) {
      crossing = double(ns[0]);
    } else {
      const double w = (0.5 - fraction[j - 1]) / (fraction[j] - fraction[j - 1]);
      crossing = double(ns[j - 1]) + w * double(ns[j] - ns[j - 1]);
    }
    break;
  }
  r.parameters.emplace_back("crossingN", crossing);
  r.checks.push_back(band("half-crossing-over-d-ln-d", crossing / dlnd, 0.7, 1.4,
                          "P{lambda_min > 0} reaches 1/2"));
  r.checks.push_back(band("lower-bound-sign-mismatches", double(mismatches), std::nullopt, 0.0,
                          "optimized lower bound positive iff n > d ln d"));
  return r;
}

ExperimentResult run_er(const ExperimentConfig& c, unsigned workers) {
  const std::size_t n = pick(c.dim, 200), trials = pick(c.trials, 200);
  check_dim(n);
  check_trials(trials);
  if (n < 3) fail(ErrorCode::ParameterRange, "need n >= 3");
  const double lnn = std::log(double(n));
  const std::vector<double> factors = {0.5, 2.0, 4.0};
  std::vector<double> ps;
  for (double f : factors) ps.push_back(std::min(1.0, f * lnn / double(n)));
  const auto sweep = connectivity_sweep(n, ps, trials, c.seed, workers);

  ExperimentResult r;
  r.parameters = {{"n", double(n)}, {"trials", double(trials)},
                  {"threshold", 2.0 * std::log(double(n - 1)) / double(n)}};
  for (std::size_t j = 0; j < ps.size(); ++j) {
    r.parameters.emplace_back("p" + fmt(factors[j]), ps[j]);
    r.parameters.emplace_back("connected" + fmt(factors[j]), sweep[j].fraction);
    // Disconnected means lambda_min(Y) <= 0; the Chernoff lower tail at eps -> 1 bounds it.
    const ChernoffStats s{ps[j] * double(n), ps[j] * double(n), 2.0, n - 1};
    const BoundReport tail = chernoff_tail(s, 1.0 - 1e-9).first;
    r.checks.push_back(band("disconnect-chernoff-" + fmt(factors[j]), 1.0 - sweep[j].wilsonHigh,
                            std::nullopt, tail.value, "wilson low of P{disconnected} <= bound"));
  }
  r.checks.push_back(band("connected-fraction-0.5", sweep[0].fraction, std::nullopt, 0.05));
  r.checks.push_back(band("connected-fraction-4", sweep[2].fraction, 0.95, std::nullopt));

  const double p = ps[2];
  TrialPlan plan;
  plan.statistic = Statistic::custom;
  plan.label = "lambdaMin";
  plan.trials = trials;
  plan.seed = mix(c.seed, 99);
  plan.evaluate = [n, p](RandomStream& rng) {
    return lambda_min(compress_laplacian(er_laplacian(n, p, rng)));
  };
  McReport rep = run_trials(plan, workers);
  const ChernoffStats s{p * double(n), p * double(n), 2.0, n - 1};
  add_bound(rep, "chernoff-lower", chernoff_expectation(s, 1.0).first, BoundSense::lower);
  add_bound(rep, "chernoff-lower-optimized",
            master_bound_minimize({CgfKind::chernoff, s.muMin, s.L, true}, double(n - 1)),
            BoundSense::lower);
  r.reports.push_back({"lambdaMin-p4", std::move(rep)});
  return r;
}

// Bernstein samplers -------------------------------------------------------------

McReport deviation_trials(const SamplerModel& model, std::size_t n, std::size_t trials,
                          std::uint64_t seed, unsigned workers) {
  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::deviationNorm;
  plan.samplesPerTrial = n;
  plan.trials = trials;
  plan.seed = seed;
  return run_trials(plan, workers);
}

std::size_t ceil_count(double x) {
  if (!(x >= 1.0) || x > 1e9) fail(ErrorCode::ParameterRange, "sample count out of range");
  return static_cast<std::size_t>(std::ceil(x));
}

ExperimentResult run_covariance(const ExperimentConfig& c, unsigned workers) {
  const std::size_t p = pick(c.dim, 32), trials = pick(c.trials, 100);
  check_dim(p);
  check_trials(trials);
  const double eps = first_eps(c);
  std::vector<double> root(p), lam(p);
  double tr = 0.0, tr2 = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    lam[k] = 1.0 / double(k + 1);
    root[k] = std::sqrt(lam[k]);
    tr += lam[k];
    tr2 += lam[k] * lam[k];
  }
  const double normA = 1.0;
  // |x|^2 exceeds this with probability below e^-20.
  const double trunc = tr + 2.0 * std::sqrt(20.0 * tr2) + 40.0 * normA;
  const std::size_t n = ceil_count(2.0 * trunc * std::log(2.0 * double(p)) / (eps * eps * normA));
  const SamplerModel model = covariance_model(DenseMatrix::diagonal(root), trunc);
  const SamplerMoments mom = sampler_moments(model);
  McReport rep = deviation_trials(model, n, trials, c.seed, workers);
  add_bound(rep, "relative-recipe", expectation_report("covariance-recipe", (eps + eps * eps) * normA));
  add_bound(rep, "sampling-expectation", sampling_expectation_bound(mom.m2, mom.L, p, p, n));

  ExperimentResult r;
  r.parameters = {{"dim", double(p)}, {"eps", eps}, {"truncation", trunc}, {"n", double(n)},
                  {"trials", double(trials)}};
  r.reports.push_back({"deviation", std::move(rep)});
  return r;
}

ExperimentResult run_sparsify(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d1 = pick(c.rows, pick(c.dim, 64)), d2 = pick(c.cols, d1);
  const std::size_t trials = pick(c.trials, 100);
  check_dim(d1);
  check_dim(d2);
  check_trials(trials);
  const double eps = first_eps(c);
  RandomStream fixture(kFixtureSeed, 10);
  const DenseMatrix b = low_rank(d1, d2, std::min<std::size_t>({4, d1, d2}), fixture);
  const double norm = spectral_norm(b), sr = stable_rank(b);
  const std::size_t n = ceil_count(sr * double(std::max(d1, d2)) * std::log(double(d1 + d2)) / (eps * eps));
  const SamplerModel model = sparsify_model(b);
  const SamplerMoments mom = sampler_moments(model);
  McReport rep = deviation_trials(model, n, trials, c.seed, workers);
  add_bound(rep, "relative-recipe",
            expectation_report("sparsify-recipe", (2.0 * eps + 4.0 / 3.0 * eps * eps / std::sqrt(sr)) * norm));
  add_bound(rep, "four-eps", expectation_report("sparsify-four-eps", 4.0 * eps * norm));
  add_bound(rep, "sampling-expectation", sampling_expectation_bound(mom.m2, mom.L, d1, d2, n));

  ExperimentResult r;
  r.parameters = {{"rows", double(d1)}, {"cols", double(d2)}, {"srank", sr}, {"eps", eps},
                  {"n", double(n)}, {"trials", double(trials)}};
  r.reports.push_back({"deviation", std::move(rep)});
  return r;
}

ExperimentResult run_rmm(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.rows, pick(c.dim, 64)), inner = pick(c.cols, 256);
  const std::size_t trials = pick(c.trials, 100);
  check_dim(d);
  check_dim(inner);
  check_trials(trials);
  const double eps = first_eps(c);
  RandomStream fixture(kFixtureSeed, 11);
  const std::size_t k = std::min<std::size_t>({4, d, inner});
  const DenseMatrix b = low_rank(d, inner, k, fixture);
  const DenseMatrix cm = low_rank(inner, d, k, fixture);
  const double nb = spectral_norm(b), nc = spectral_norm(cm);
  const double fb = frobenius_norm(b), fc = frobenius_norm(cm);
  const double asr = (fb * fb + fc * fc) / (2.0 * nb * nc);
  const std::size_t n = ceil_count(asr * std::log(double(2 * d)) / (eps * eps));
  const SamplerModel model = rmm_model(b, cm);
  const SamplerMoments mom = sampler_moments(model);
  McReport rep = deviation_trials(model, n, trials, c.seed, workers);
  add_bound(rep, "relative-recipe",
            expectation_report("rmm-recipe", (2.0 * eps + 2.0 / 3.0 * eps * eps) * nb * nc));
  add_bound(rep, "sampling-expectation", sampling_expectation_bound(mom.m2, mom.L, d, d, n));

  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"inner", double(inner)}, {"asr", asr}, {"eps", eps},
                  {"n", double(n)}, {"trials", double(trials)}};
  r.reports.push_back({"deviation", std::move(rep)});
  return r;
}

ExperimentResult run_random_features(const ExperimentConfig& c, unsigned workers) {
  const std::size_t npts = pick(c.dim, 128), trials = pick(c.trials, 100);
  check_dim(npts);
  check_trials(trials);
  const double eps = first_eps(c);
  RandomStream fixture(kFixtureSeed, 12);
  KernelSpec spec;
  spec.kind = KernelKind::rbf;
  spec.alpha = 10.0;
  for (std::size_t i = 0; i < npts; ++i) spec.points.push_back({fixture.uniform_open(), fixture.uniform_open()});
  const SamplerModel model = kernel_features_model(spec);
  const SymmetricMatrix g(model.target);
  const double gnorm = spectral_norm(g), idim = intrinsic_dim(g);
  const std::size_t n = ceil_count(2.0 * spec.b() * idim * std::log(2.0 * double(npts)) / (eps * eps));
  const SamplerMoments mom = sampler_moments(model);
  McReport rep = deviation_trials(model, n, trials, c.seed, workers);
  add_bound(rep, "relative-recipe",
            expectation_report("features-recipe", (eps + eps * eps / 3.0) * gnorm));
  add_bound(rep, "sampling-expectation", sampling_expectation_bound(mom.m2, mom.L, npts, npts, n));

  ExperimentResult r;
  r.parameters = {{"points", double(npts)}, {"alpha", spec.alpha}, {"intdim", idim}, {"normG", gnorm},
                  {"eps", eps}, {"n", double(n)}, {"trials", double(trials)}};
  r.reports.push_back({"deviation", std::move(rep)});
  return r;
}

ExperimentResult run_intrinsic_rmm(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.rows, pick(c.dim, 256)), inner = pick(c.cols, 512);
  const std::size_t trials = pick(c.trials, 100);
  check_dim(d);
  check_dim(inner);
  check_trials(trials);
  const double eps = first_eps(c);
  RandomStream fixture(kFixtureSeed, 13);
  const std::size_t k = std::min<std::size_t>({4, d, inner});
  const DenseMatrix b = low_rank(d, inner, k, fixture);
  const DenseMatrix cm = low_rank(inner, d, k, fixture);
  const double nb = spectral_norm(b), nc = spectral_norm(cm);
  const double fb2 = std::pow(frobenius_norm(b), 2), fc2 = std::pow(frobenius_norm(cm), 2);
  const double asr = (fb2 + fc2) / (2.0 * nb * nc);
  const std::size_t n = ceil_count(asr * std::log1p(asr) / (eps * eps));
  const SamplerModel model = rmm_model(b, cm);
  const SamplerMoments mom = sampler_moments(model);
  // Variance proxy diag(m BB^T, m C^T C)/n has intrinsic dimension (|B|_F^2 + |C|_F^2) / max norm^2.
  const IntrinsicStats is{(fb2 + fc2) / std::max(nb * nb, nc * nc), mom.m2 / double(n),
                          2.0 * mom.L / double(n), std::nullopt};

  TrialPlan plan;
  plan.model = &model;
  plan.statistic = Statistic::deviationNorm;
  plan.samplesPerTrial = n;
  plan.trials = trials;
  plan.seed = c.seed;
  const double t0 = std::sqrt(is.v) + is.L / 3.0;
  plan.tGrid = scaled_grid(c, t0, {1.0, 1.5, 2.0, 3.0, 4.0, 5.0});
  McReport dev = run_trials(plan, workers);
  ExperimentResult r;
  for (const auto& tail : dev.tails) {
    const BoundReport in = intdim_bernstein(is, tail.t);
    const BoundReport amb = sampling_tail_bound(mom.m2, mom.L, d, d, n, tail.t);
    if (in.valid) add_tail_bound(dev, "intdim-bernstein", tail.t, in);
    add_tail_bound(dev, "ambient-bernstein", tail.t, amb);
    if (in.valid)
      r.checks.push_back(band("intrinsic-below-ambient-t=" + fmt(tail.t), in.raw / amb.raw, std::nullopt,
                              1.0 - 1e-12, "raw tail bound ratio"));
  }
  const BoundReport inExp = intdim_bernstein_expectation(is);
  const BoundReport ambExp = sampling_expectation_bound(mom.m2, mom.L, d, d, n);
  add_bound(dev, "intdim-bernstein-expectation", inExp);
  add_bound(dev, "ambient-bernstein-expectation", ambExp);

  // Intrinsic Chernoff on a column submatrix of B.
  const double p = double(inner) / 4.0;
  double colmax = 0.0;
  for (std::size_t j = 0; j < inner; ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) sq += b(i, j) * b(i, j);
    colmax = std::max(colmax, sq);
  }
  const SymmetricMatrix mean((p / double(inner)) * gram_rows(b));
  const double muMax = lambda_max(mean);
  const IntrinsicStats ic{intrinsic_dim(mean), 0.0, colmax, muMax};
  const ChernoffStats amb{0.0, muMax, colmax, d};
  TrialPlan cp;
  cp.statistic = Statistic::custom;
  cp.label = "lambdaMax";
  cp.trials = trials;
  cp.seed = mix(c.seed, 1);
  std::vector<double> epsGrid;
  for (double e : {0.5, 1.0, 2.0})
    if (e >= colmax / muMax) epsGrid.push_back(e);
  for (double e : epsGrid) cp.tGrid.push_back((1.0 + e) * muMax);
  cp.evaluate = [&b, p](RandomStream& rng) {
    return lambda_max(SymmetricMatrix(gram_rows(column_submatrix(b, p, rng))));
  };
  McReport top = run_trials(cp, workers);
  const auto [icExp, icTail0] = intdim_chernoff(ic, 1.0, epsGrid.empty() ? 1.0 : epsGrid.front());
  (void)icTail0;
  const BoundReport ambCh = chernoff_expectation(amb, 1.0).second;
  add_bound(top, "intdim-chernoff-expectation", icExp);
  add_bound(top, "ambient-chernoff-expectation", ambCh);
  r.checks.push_back(band("intdim-chernoff-expectation-below-ambient", icExp.value / ambCh.value,
                          std::nullopt, 1.0 - 1e-12));
  for (double e : epsGrid) {
    const double t = (1.0 + e) * muMax;
    const BoundReport in = intdim_chernoff(ic, 1.0, e).second;
    const BoundReport am = chernoff_tail(amb, e).second;
    add_tail_bound(top, "intdim-chernoff-tail", t, in);
    add_tail_bound(top, "ambient-chernoff-tail", t, am);
    r.checks.push_back(band("intdim-chernoff-tail-below-ambient-eps=" + fmt(e), in.raw / am.raw,
                            std::nullopt, 1.0 - 1e-12));
  }

  r.parameters = {{"dim", double(d)}, {"inner", double(inner)}, {"asr", asr}, {"eps", eps},
                  {"n", double(n)}, {"trials", double(trials)}, {"intdimBernstein", is.intDim},
                  {"intdimChernoff", ic.intDim}, {"p", p},
                  {"intdimExpectationOverAmbient", inExp.value / ambExp.value}};
  r.reports.push_back({"deviation", std::move(dev)});
  r.reports.push_back({"lambdaMax", std::move(top)});
  return r;
}

// Deterministic suites -------------------------------------------------------------

SymmetricMatrix random_pd(std::size_t d, RandomStream& rng) {
  const DenseMatrix g = gaussian_matrix(d, d, rng);
  return SymmetricMatrix((1.0 / double(d)) * gram_rows(g)) + 0.1 * SymmetricMatrix::identity(d);
}

SymmetricMatrix random_sym(std::size_t d, RandomStream& rng) {
  const DenseMatrix g = gaussian_matrix(d, d, rng);
  return SymmetricMatrix(0.25 * (g + g.transpose()));
}

ExperimentResult run_entropy_suite(const ExperimentConfig& c, unsigned workers) {
  const std::size_t count = pick(c.trials, 500);
  check_trials(count);
  enum { kRel, kJoint, kLieb, kGt, kKron, kVar, kVarZero, kFields };
  std::vector<std::array<double, kFields>> out(count);
  const RandomStream root(c.seed);
  parallel_for(count, workers, [&](std::size_t i) {
    RandomStream rng = root.split(i);
    const std::size_t d = 2 + rng.below(5);
    const SymmetricMatrix a1 = random_pd(d, rng), a2 = random_pd(d, rng);
    const SymmetricMatrix h1 = random_pd(d, rng), h2 = random_pd(d, rng);
    const SymmetricMatrix s1 = random_sym(d, rng), s2 = random_sym(d, rng);
    const double tau = rng.uniform(0.1, 0.9);
    const PositiveDefiniteMatrix A1(a1), A2(a2), H1(h1), H2(h2);
    const PositiveDefiniteMatrix Am(tau * a1 + (1.0 - tau) * a2), Hm(tau * h1 + (1.0 - tau) * h2);
    auto& o = out[i];
    o[kRel] = relative_entropy(A1, H1);
    o[kJoint] = tau * o[kRel] + (1.0 - tau) * relative_entropy(A2, H2) - relative_entropy(Am, Hm);
    o[kLieb] = lieb_trace_fn(s1, Am) - tau * lieb_trace_fn(s1, A1) - (1.0 - tau) * lieb_trace_fn(s1, A2);
    o[kGt] = golden_thompson_gap(s1, s2);
    const SymmetricMatrix lhs = matrix_log(PositiveDefiniteMatrix(kron(a1, h1)));
    const SymmetricMatrix rhs = kron(matrix_log(A1), SymmetricMatrix::identity(d)) +
                                kron(SymmetricMatrix::identity(d), matrix_log(H1));
    double err = 0.0;
    const DenseMatrix diff = (lhs - rhs).dense();
    for (double x : diff.entries()) err = std::max(err, std::abs(x));
    o[kKron] = err;
    o[kVar] = variational_trace_gap(A1, H1);
    o[kVarZero] = std::abs(variational_trace_gap(A1, A1));
  });
  auto col_min = [&](int f) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& o : out) m = std::min(m, o[f]);
    return m;
  };
  auto col_max = [&](int f) {
    double m = 0.0;
    for (const auto& o : out) m = std::max(m, o[f]);
    return m;
  };
  ExperimentResult r;
  r.parameters = {{"instances", double(count)}};
  r.checks.push_back(band("relative-entropy-min", col_min(kRel), -1e-9, std::nullopt));
  r.checks.push_back(band("joint-convexity-residual-min", col_min(kJoint), -1e-8, std::nullopt));
  r.checks.push_back(band("lieb-concavity-residual-min", col_min(kLieb), -1e-8, std::nullopt));
  r.checks.push_back(band("golden-thompson-gap-min", col_min(kGt), -1e-9, std::nullopt));
  r.checks.push_back(band("kronecker-log-max-error", col_max(kKron), std::nullopt, 1e-8));
  r.checks.push_back(band("variational-gap-min", col_min(kVar), -1e-9, std::nullopt));
  r.checks.push_back(band("variational-gap-at-equality-max", col_max(kVarZero), std::nullopt, 1e-9));
  return r;
}

ExperimentResult run_khintchine(const ExperimentConfig& c, unsigned workers) {
  const std::size_t d = pick(c.dim, 6), trials = pick(c.trials, 10000);
  check_dim(d);
  check_trials(trials);
  if (d < 2) fail(ErrorCode::ParameterRange, "need d >= 2");
  const SeriesCoefficients series = make_wigner(d);
  ExperimentResult r;
  r.parameters = {{"dim", double(d)}, {"trials", double(trials)}};
  for (int q = 1; q <= 3; ++q) {
    const KhintchineResult k = khintchine_check(series, q, trials, mix(c.seed, std::uint64_t(q)), workers);
    const std::string tag = "q=" + std::to_string(q);
    r.parameters.emplace_back("estimate-" + tag, k.estimate);
    r.parameters.emplace_back("rhs-" + tag, k.rhs);
    Check ch = band("khintchine-" + tag, k.estimate, std::nullopt, k.rhs + 3.0 * k.stdError,
                    "estimate <= C rhs + 3 stderr");
    ch.pass = ch.pass && k.pass;
    r.checks.push_back(std::move(ch));
    if (q == 1)
      r.checks.push_back(band("second-moment-equality", std::abs(k.estimate - k.exactSecondMoment),
                              std::nullopt, 3.0 * k.stdError, "|estimate - exact| <= 3 stderr"));
  }
  return r;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

ExperimentResult run_master_vs_closed(const ExperimentConfig& c, unsigned) {
  const std::size_t points = pick(c.trials, 20);
  if (points > 10000) fail(ErrorCode::ParameterRange, "grid too large");
  double seriesExp = 0, seriesTail = 0, chUp = 0, chLo = 0, chFixedUp = 0, chFixedLo = 0;
  double chOptUp = -1e300, chOptLo = -1e300, bTailTheta = 0, bTailOpt = -1e300, bExpOpt = -1e300;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = double(i);
    const double v = 0.5 * std::pow(1.4, x);
    const std::size_t d1 = 2 + 7 * i, d2 = 3 + 11 * i;
    const double d = double(d1 + d2);
    const double t = std::sqrt(2.0 * v * std::log(d)) * (1.1 + 0.05 * x);
    const double L = 0.2 + 0.15 * x;
    const double mu = 1.0 + 1.5 * x;
    const double eps = 0.05 + 0.045 * x;
    const double theta = 0.25 + 0.2 * x;

    const CgfModel gauss{CgfKind::gaussianSeries, v, 0.0, false};
    seriesExp = std::max(seriesExp, rel_err(master_bound_minimize(gauss, d).value,
                                            series_expectation_bound(v, d1, d2).value));
    seriesTail = std::max(seriesTail, rel_err(master_bound_minimize(gauss, d, t).raw,
                                              series_tail_bound(v, d1, d2, t).raw));

    const ChernoffStats s{mu, mu, L, d1 + d2};
    const auto [lowTail, upTail] = chernoff_tail(s, eps);
    const CgfModel up{CgfKind::chernoff, mu, L, false}, lo{CgfKind::chernoff, mu, L, true};
    chUp = std::max(chUp, rel_err(master_bound_minimize(up, d, (1.0 + eps) * mu).raw, upTail.raw));
    chLo = std::max(chLo, rel_err(master_bound_minimize(lo, d, (1.0 - eps) * mu).raw, lowTail.raw));
    const auto [lowExp, upExp] = chernoff_expectation(s, theta);
    chFixedUp = std::max(chFixedUp, rel_err(master_objective(up, d, theta / L), upExp.value));
    chFixedLo = std::max(chFixedLo, rel_err(master_objective(lo, d, theta / L), lowExp.value));
    const auto [low1, up1] = chernoff_expectation(s, 1.0);
    chOptUp = std::max(chOptUp, (master_bound_minimize(up, d).value - up1.value) / std::abs(up1.value));
    chOptLo = std::max(chOptLo, (low1.value - master_bound_minimize(lo, d).value) / std::abs(low1.value));

    const CgfModel bern{CgfKind::bernstein, v, L, false};
    const BoundReport bt = bernstein_tail(v, L, d1, d2, t);
    bTailTheta = std::max(bTailTheta, rel_err(master_objective(bern, d, *bt.theta, t), bt.raw));
    bTailOpt = std::max(bTailOpt, (master_bound_minimize(bern, d, t).raw - bt.raw) / bt.raw);
    const BoundReport be = bernstein_expectation(v, L, d1, d2);
    bExpOpt = std::max(bExpOpt, (master_bound_minimize(bern, d).value - be.value) / be.value);
  }
  ExperimentResult r;
  r.parameters = {{"gridPoints", double(points)}};
  const double tol = 1e-6;
  r.checks.push_back(band("gaussian-expectation-rel-error", seriesExp, std::nullopt, tol));
  r.checks.push_back(band("gaussian-tail-rel-error", seriesTail, std::nullopt, tol));
  r.checks.push_back(band("chernoff-upper-tail-rel-error", chUp, std::nullopt, tol));
  r.checks.push_back(band("chernoff-lower-tail-rel-error", chLo, std::nullopt, tol));
  r.checks.push_back(band("chernoff-upper-expectation-fixed-theta-rel-error", chFixedUp, std::nullopt, tol));
  r.checks.push_back(band("chernoff-lower-expectation-fixed-theta-rel-error", chFixedLo, std::nullopt, tol));
  r.checks.push_back(band("chernoff-upper-optimized-excess", chOptUp, std::nullopt, tol,
                          "numeric optimum minus theta=1 form, relative"));
  r.checks.push_back(band("chernoff-lower-optimized-excess", chOptLo, std::nullopt, tol,
                          "theta=1 form minus numeric optimum, relative"));
  r.checks.push_back(band("bernstein-tail-at-closed-theta-rel-error", bTailTheta, std::nullopt, tol));
  r.checks.push_back(band("bernstein-tail-optimized-excess", bTailOpt, std::nullopt, tol));
  r.checks.push_back(band("bernstein-expectation-optimized-excess", bExpOpt, std::nullopt, tol));
  return r;
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&, unsigned)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r = {
      {"wigner", run_wigner},
      {"rect-gaussian", run_rect_gaussian},
      {"signed", run_signed},
      {"toeplitz", run_toeplitz},
      {"maxqp", run_maxqp},
      {"chernoff-submatrix", run_chernoff_submatrix},
      {"er-connectivity", run_er},
      {"coupon", run_coupon},
      {"covariance", run_covariance},
      {"sparsify", run_sparsify},
      {"rmm", run_rmm},
      {"random-features", run_random_features},
      {"intrinsic-rmm", run_intrinsic_rmm},
      {"entropy-suite", run_entropy_suite},
      {"khintchine", run_khintchine},
      {"master-vs-closed", run_master_vs_closed},
  };
  return r;
}

}  // namespace

bool ExperimentResult::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  for (const auto& r : reports)
    for (const auto& v : bound_check(r.report))
      if (!v.pass) return false;
  return true;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "wigner",    "rect-gaussian", "signed", "toeplitz",        "maxqp",         "chernoff-submatrix",
      "er-connectivity", "coupon",  "covariance", "sparsify",    "rmm",           "random-features",
      "intrinsic-rmm", "entropy-suite", "khintchine", "master-vs-closed"};
  return ids;
}

bool is_experiment(const std::string& id) { return registry().count(id) > 0; }

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers) {
  const auto it = registry().find(config.experimentId);
  if (it == registry().end()) fail(ErrorCode::UsageError, "unknown experiment '" + config.experimentId + "'");
  for (double e : config.eps)
    if (!(e > 0.0 && e <= 1.0)) fail(ErrorCode::ParameterRange, "eps must lie in (0, 1]");
  for (double t : config.t)
    if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::ParameterRange, "t must be finite and >= 0");
  ExperimentResult r = it->second(config, std::max(1u, workers));
  r.experimentId = config.experimentId;
  r.parameters.insert(r.parameters.begin(), {"seed", double(config.seed)});
  return r;
}

}  // namespace concentrix
