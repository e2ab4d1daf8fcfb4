#include "concentrix/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "concentrix/error.hpp"

namespace concentrix {

namespace {

constexpr double kE = std::numbers::e;

double ln_dims(std::size_t d1, std::size_t d2, bool symmetric) {
  return std::log(static_cast<double>(symmetric ? d1 : d1 + d2));
}

double dims(std::size_t d1, std::size_t d2, bool symmetric) {
  return static_cast<double>(symmetric ? d1 : d1 + d2);
}

void require_nonneg(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::ParameterRange, what);
}

}  // namespace

BoundReport expectation_report(std::string id, double value) {
  BoundReport r;
  r.kind = BoundKind::expectation;
  r.formulaId = std::move(id);
  r.value = value;
  r.raw = value;
  return r;
}

BoundReport tail_report(std::string id, double raw) {
  BoundReport r;
  r.kind = BoundKind::tailProbability;
  r.formulaId = std::move(id);
  r.raw = raw;
  r.value = std::clamp(raw, 0.0, 1.0);
  return r;
}

BoundReport series_expectation_bound(double v, std::size_t d1, std::size_t d2, bool symmetric) {
  require_nonneg(v, "variance must be nonnegative");
  return expectation_report("series-expectation", std::sqrt(2.0 * v * ln_dims(d1, d2, symmetric)));
}

BoundReport series_tail_bound(double v, std::size_t d1, std::size_t d2, double t, bool symmetric) {
  require_nonneg(v, "variance must be nonnegative");
  require_nonneg(t, "t must be nonnegative");
  const double d = dims(d1, d2, symmetric);
  const double raw = v > 0.0 ? d * std::exp(-t * t / (2.0 * v)) : (t > 0.0 ? 0.0 : d);
  return tail_report("series-tail", raw);
}

BoundReport gauss_concentration_tail(double vWeak, double t) {
  require_nonneg(vWeak, "weak variance must be nonnegative");
  require_nonneg(t, "t must be nonnegative");
  const double raw = vWeak > 0.0 ? std::exp(-t * t / (2.0 * vWeak)) : (t > 0.0 ? 0.0 : 1.0);
  return tail_report("gauss-concentration", raw);
}

std::pair<double, double> series_second_moment_range(double v, std::size_t d1, std::size_t d2) {
  require_nonneg(v, "variance must be nonnegative");
  return {v, 2.0 * v * (1.0 + std::log(static_cast<double>(d1 + d2)))};
}

std::pair<BoundReport, BoundReport> chernoff_expectation(const ChernoffStats& s, double theta) {
  if (!(theta > 0.0)) fail(ErrorCode::ParameterRange, "theta must be positive");
  const double lnd = std::log(static_cast<double>(s.dim));
  auto lo = expectation_report("chernoff-expectation-lower",
                               -std::expm1(-theta) / theta * s.muMin - s.L * lnd / theta);
  auto hi = expectation_report("chernoff-expectation-upper",
                               std::expm1(theta) / theta * s.muMax + s.L * lnd / theta);
  lo.theta = theta;
  hi.theta = theta;
  return {lo, hi};
}

std::pair<BoundReport, BoundReport> chernoff_tail(const ChernoffStats& s, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) fail(ErrorCode::ParameterRange, "eps must be >= 0");
  const double d = static_cast<double>(s.dim);
  // (1-eps)^(1-eps) with the 0^0 = 1 convention at eps = 1.
  const double one_minus = 1.0 - eps;
  const double log_lower = one_minus > 0.0 ? -eps - one_minus * std::log(one_minus) : -1.0;
  BoundReport lo = tail_report("chernoff-tail-lower",
                               eps <= 1.0 ? d * std::exp(log_lower * s.muMin / s.L) : 0.0);
  lo.epsilon = eps;
  if (eps >= 1.0) {
    lo.valid = false;
    lo.reason = "lower tail needs eps in [0,1)";
  }
  const double log_upper = eps - (1.0 + eps) * std::log1p(eps);
  BoundReport hi = tail_report("chernoff-tail-upper", d * std::exp(log_upper * s.muMax / s.L));
  hi.epsilon = eps;
  return {lo, hi};
}

BoundReport chernoff_lower_tail_weak(const ChernoffStats& s, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorCode::ParameterRange, "eps must be in [0,1]");
  auto r = tail_report("chernoff-tail-lower-weak",
                       static_cast<double>(s.dim) * std::exp(-eps * eps * s.muMin / (2.0 * s.L)));
  r.epsilon = eps;
  return r;
}

BoundReport chernoff_upper_tail_weak(const ChernoffStats& s, double t) {
  if (!(t > 0.0)) fail(ErrorCode::ParameterRange, "t must be positive");
  auto r = tail_report("chernoff-tail-upper-weak",
                       static_cast<double>(s.dim) * std::pow(kE / t, t * s.muMax / s.L));
  if (t < kE) {
    r.valid = false;
    r.reason = "weak upper tail needs t >= e";
  }
  return r;
}

BoundReport matrix_rosenthal(double muMax, double expMaxSummand, std::size_t d) {
  require_nonneg(muMax, "muMax must be nonnegative");
  require_nonneg(expMaxSummand, "expected max summand must be nonnegative");
  return expectation_report("matrix-rosenthal",
                            2.0 * muMax + 8.0 * kE * expMaxSummand * std::log(static_cast<double>(d)));
}

BoundReport bernstein_expectation(double v, double L, std::size_t d1, std::size_t d2) {
  require_nonneg(v, "variance must be nonnegative");
  require_nonneg(L, "L must be nonnegative");
  const double a = std::log(static_cast<double>(d1 + d2));
  return expectation_report("bernstein-expectation", std::sqrt(2.0 * v * a) + L * a / 3.0);
}

BoundReport bernstein_tail(double v, double L, std::size_t d1, std::size_t d2, double t) {
  require_nonneg(v, "variance must be nonnegative");
  require_nonneg(L, "L must be nonnegative");
  require_nonneg(t, "t must be nonnegative");
  const double d = static_cast<double>(d1 + d2);
  const double denom = v + L * t / 3.0;
  const double raw = denom > 0.0 ? d * std::exp(-t * t / 2.0 / denom) : (t > 0.0 ? 0.0 : d);
  auto r = tail_report("bernstein-tail", raw);
  if (denom > 0.0) r.theta = t / denom;
  return r;
}

BoundReport split_bernstein_tail(double v, double L, std::size_t d1, std::size_t d2, double t) {
  require_nonneg(v, "variance must be nonnegative");
  require_nonneg(L, "L must be nonnegative");
  require_nonneg(t, "t must be nonnegative");
  const double d = static_cast<double>(d1 + d2);
  double raw;
  if (L == 0.0 || t <= v / L)
    raw = v > 0.0 ? d * std::exp(-3.0 * t * t / (8.0 * v)) : (t > 0.0 ? 0.0 : d);
  else
    raw = d * std::exp(-3.0 * t / (8.0 * L));
  return tail_report("bernstein-tail-split", raw);
}

BoundReport rosenthal_pinelis(double v, double expMaxSq, std::size_t d1, std::size_t d2) {
  require_nonneg(v, "variance must be nonnegative");
  require_nonneg(expMaxSq, "expected max square must be nonnegative");
  const double a = std::log(static_cast<double>(d1 + d2));
  return expectation_report("rosenthal-pinelis",
                            std::sqrt(2.0 * kE * v * a) + 4.0 * kE * std::sqrt(expMaxSq) * a);
}

BoundReport sampling_expectation_bound(double m2, double L, std::size_t d1, std::size_t d2,
                                       std::size_t n) {
  if (n == 0) fail(ErrorCode::ParameterRange, "n must be positive");
  const double nn = static_cast<double>(n);
  auto r = bernstein_expectation(m2 / nn, 2.0 * L / nn, d1, d2);
  r.formulaId = "sampling-expectation";
  return r;
}

BoundReport sampling_tail_bound(double m2, double L, std::size_t d1, std::size_t d2,
                                std::size_t n, double t) {
  if (n == 0) fail(ErrorCode::ParameterRange, "n must be positive");
  const double nn = static_cast<double>(n);
  auto r = bernstein_tail(m2 / nn, 2.0 * L / nn, d1, d2, t);
  r.formulaId = "sampling-tail";
  return r;
}

std::pair<BoundReport, BoundReport> intdim_chernoff(const IntrinsicStats& s, double theta,
                                                    double eps) {
  if (!(theta > 0.0)) fail(ErrorCode::ParameterRange, "theta must be positive");
  if (!(eps >= 0.0)) fail(ErrorCode::ParameterRange, "eps must be nonnegative");
  if (!s.muMax) fail(ErrorCode::InvalidInput, "intrinsic Chernoff needs muMax");
  const double mu = *s.muMax;
  const double ln2d = std::log(2.0 * s.intDim);
  auto e = expectation_report("intdim-chernoff-expectation",
                              std::expm1(theta) / theta * mu + s.L * ln2d / theta);
  e.theta = theta;
  const double log_upper = eps - (1.0 + eps) * std::log1p(eps);
  auto t = tail_report("intdim-chernoff-tail", 2.0 * s.intDim * std::exp(log_upper * mu / s.L));
  t.epsilon = eps;
  if (eps < s.L / mu) {
    t.valid = false;
    t.reason = "tail needs eps >= L/muMax";
  }
  return {e, t};
}

BoundReport intdim_bernstein(const IntrinsicStats& s, double t) {
  require_nonneg(t, "t must be nonnegative");
  const double denom = s.v + s.L * t / 3.0;
  const double raw = denom > 0.0 ? 4.0 * s.intDim * std::exp(-t * t / 2.0 / denom) : 0.0;
  auto r = tail_report("intdim-bernstein-tail", raw);
  if (t < std::sqrt(s.v) + s.L / 3.0) {
    r.valid = false;
    r.reason = "tail needs t >= sqrt(v) + L/3";
  }
  return r;
}

BoundReport intdim_bernstein_expectation(const IntrinsicStats& s) {
  const double a = std::log1p(s.intDim);
  return expectation_report("intdim-bernstein-expectation",
                            std::sqrt(2.0 * s.v * a) + 2.0 / 3.0 * s.L * a +
                                4.0 * std::sqrt(s.v) + 8.0 / 3.0 * s.L);
}

double khintchine_constant(int q) {
  if (q < 0) fail(ErrorCode::ParameterRange, "q must be nonnegative");
  double c = 1.0;
  for (int k = 1; k <= q; ++k) c *= static_cast<double>(2 * k - 1);
  return c;
}

double CgfModel::g(double theta) const {
  switch (kind) {
    case CgfKind::gaussianSeries:
    case CgfKind::rademacherSeries:
      return 0.5 * theta * theta;
    case CgfKind::chernoff:
      return L > 0.0 ? std::expm1(theta * L) / L : theta;
    case CgfKind::bernstein: {
      const double den = 1.0 - theta * L / 3.0;
      if (den <= 0.0) return std::numeric_limits<double>::infinity();
      return 0.5 * theta * theta / den;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double CgfModel::theta_max() const {
  if (kind == CgfKind::bernstein && L > 0.0) return 3.0 / L * (1.0 - 1e-9);
  return std::numeric_limits<double>::infinity();
}

double master_objective(const CgfModel& model, double d, double theta, std::optional<double> t) {
  const double lnd = std::log(d);
  const bool lower = model.kind == CgfKind::chernoff && model.lower;
  const double gs = (lower ? model.g(-theta) : model.g(theta)) * model.scale;
  if (!t) {
    // Lower Chernoff: E lambda_min >= (g(-theta) mu - ln d) / (-theta).
    return lower ? (-gs - lnd) / theta : (lnd + gs) / theta;
  }
  const double expo = lower ? theta * *t + gs : -theta * *t + gs;
  return std::exp(lnd + expo);
}

namespace {

bool model_valid(const CgfModel& m) {
  if (!(m.scale >= 0.0) || !std::isfinite(m.scale)) return false;
  if (!(m.L >= 0.0) || !std::isfinite(m.L)) return false;
  if (m.kind == CgfKind::chernoff && !(m.L > 0.0)) return false;
  return true;
}

}  // namespace

BoundReport master_bound_minimize(const CgfModel& model, double d, std::optional<double> t) {
  if (!model_valid(model)) fail(ErrorCode::ParameterRange, "invalid cgf model parameters");
  if (!(d >= 1.0)) fail(ErrorCode::ParameterRange, "dimension must be at least 1");
  const bool lower_exp = model.kind == CgfKind::chernoff && model.lower && !t;
  // Minimize in log-theta; work with log of the tail objective to avoid overflow.
  auto h = [&](double u) {
    const double theta = std::exp(u);
    double f;
    if (t) {
      const bool lower = model.kind == CgfKind::chernoff && model.lower;
      const double gs = (lower ? model.g(-theta) : model.g(theta)) * model.scale;
      f = std::log(d) + (lower ? theta * *t : -theta * *t) + gs;
    } else {
      f = master_objective(model, d, theta);
      if (lower_exp) f = -f;
    }
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };
  double a = std::log(1e-12);
  double b = std::log(std::min(model.theta_max(), 1e8));
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), e = a + invphi * (b - a);
  double fc = h(c), fe = h(e);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    if (b - a <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
      converged = true;
      break;
    }
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - invphi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + invphi * (b - a);
      fe = h(e);
    }
  }
  if (!converged) fail(ErrorCode::NumericalFailure, "theta search did not converge");
  const double u = 0.5 * (a + b);
  const double theta = std::exp(u);
  const double best = h(u);
  if (!std::isfinite(best)) fail(ErrorCode::NumericalFailure, "master objective not finite");
  BoundReport r;
  if (t) {
    r = tail_report("master-tail", std::exp(best));
  } else {
    r = expectation_report("master-expectation", lower_exp ? -best : best);
  }
  r.theta = theta;
  return r;
}

}  // namespace concentrix
