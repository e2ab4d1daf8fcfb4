#pragma once

#include <optional>
#include <string>
#include <utility>

#include "concentrix/stats.hpp"

namespace concentrix {

enum class BoundKind { expectation, tailProbability };

struct BoundReport {
  double value = 0.0;  // clamped to [0,1] for tails
  double raw = 0.0;    // unclamped
  BoundKind kind = BoundKind::expectation;
  std::string formulaId;
  std::optional<double> theta;
  std::optional<double> epsilon;
  bool valid = true;
  std::string reason;
};

BoundReport expectation_report(std::string id, double value);
BoundReport tail_report(std::string id, double raw);

// Gaussian and Rademacher series. With symmetric set, d1 is the dimension and
// ln d replaces ln(d1+d2).
BoundReport series_expectation_bound(double v, std::size_t d1, std::size_t d2,
                                     bool symmetric = false);
BoundReport series_tail_bound(double v, std::size_t d1, std::size_t d2, double t,
                              bool symmetric = false);
BoundReport gauss_concentration_tail(double vWeak, double t);
/// v <= E|Z|^2 <= 2v(1 + ln(d1+d2)).
std::pair<double, double> series_second_moment_range(double v, std::size_t d1, std::size_t d2);

// Chernoff.
std::pair<BoundReport, BoundReport> chernoff_expectation(const ChernoffStats& s, double theta = 1.0);
std::pair<BoundReport, BoundReport> chernoff_tail(const ChernoffStats& s, double eps);
/// d exp(-eps^2 muMin / 2L)
BoundReport chernoff_lower_tail_weak(const ChernoffStats& s, double eps);
/// d (e/t)^(t muMax / L) for the event lambda_max >= t muMax.
BoundReport chernoff_upper_tail_weak(const ChernoffStats& s, double t);
BoundReport matrix_rosenthal(double muMax, double expMaxSummand, std::size_t d);

// Bernstein.
BoundReport bernstein_expectation(double v, double L, std::size_t d1, std::size_t d2);
BoundReport bernstein_tail(double v, double L, std::size_t d1, std::size_t d2, double t);
BoundReport split_bernstein_tail(double v, double L, std::size_t d1, std::size_t d2, double t);
BoundReport rosenthal_pinelis(double v, double expMaxSq, std::size_t d1, std::size_t d2);

/// Empirical approximation with n samples, per-sample moment m2 and |R| <= L.
BoundReport sampling_expectation_bound(double m2, double L, std::size_t d1, std::size_t d2,
                                       std::size_t n);
BoundReport sampling_tail_bound(double m2, double L, std::size_t d1, std::size_t d2,
                                std::size_t n, double t);

// Intrinsic dimension.
std::pair<BoundReport, BoundReport> intdim_chernoff(const IntrinsicStats& s, double theta,
                                                    double eps);
BoundReport intdim_bernstein(const IntrinsicStats& s, double t);
BoundReport intdim_bernstein_expectation(const IntrinsicStats& s);

/// (2q)! / (2^q q!)
double khintchine_constant(int q);

// Master bounds.
enum class CgfKind { gaussianSeries, rademacherSeries, chernoff, bernstein };

struct CgfModel {
  CgfKind kind = CgfKind::gaussianSeries;
  double scale = 0.0;  // v, or mu for chernoff
  double L = 0.0;
  /// Chernoff only: bound lambda_min from below instead of lambda_max from above.
  bool lower = false;

  double g(double theta) const;
  double theta_max() const;
};

/// Master objective at a fixed theta > 0. Without t: (ln d + g s)/theta; with t:
/// d exp(-theta t + g s). Lower Chernoff uses -theta internally.
double master_objective(const CgfModel& model, double d, double theta,
                        std::optional<double> t = std::nullopt);
BoundReport master_bound_minimize(const CgfModel& model, double d,
                                  std::optional<double> t = std::nullopt);

}  // namespace concentrix
