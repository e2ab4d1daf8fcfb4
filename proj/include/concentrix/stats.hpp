#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "concentrix/matcore.hpp"

namespace concentrix {

enum class Modulator { gaussian, rademacher };

/// One coefficient stored as (row, col, value) triplets.
struct CoefficientMatrix {
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };
  std::vector<Entry> entries;

  static CoefficientMatrix from_dense(const DenseMatrix& b);
  DenseMatrix to_dense(std::size_t d1, std::size_t d2) const;
};

/// Fixed coefficients {B_k} of a common d1 x d2 shape plus the scalar modulator.
class SeriesCoefficients {
 public:
  SeriesCoefficients(std::size_t d1, std::size_t d2, Modulator modulator);
  SeriesCoefficients(const std::vector<DenseMatrix>& coeffs, Modulator modulator);

  void add(const DenseMatrix& b);
  void add(CoefficientMatrix b);

  std::size_t d1() const noexcept { return d1_; }
  std::size_t d2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  Modulator modulator() const noexcept { return modulator_; }
  const CoefficientMatrix& coefficient(std::size_t k) const { return coeffs_[k]; }
  DenseMatrix dense(std::size_t k) const { return coeffs_[k].to_dense(d1_, d2_); }
  /// True when every coefficient is square and symmetric.
  bool symmetric() const;

 private:
  std::size_t d1_, d2_;
  Modulator modulator_;
  std::vector<CoefficientMatrix> coeffs_;
};

struct VarianceStats {
  double v = 0.0;
  std::optional<double> L;
  std::size_t d1 = 1, d2 = 1;
  std::optional<double> vWeak;
};

struct ChernoffStats {
  double muMin = 0.0;
  double muMax = 0.0;
  double L = 1.0;
  std::size_t dim = 1;
};

struct IntrinsicStats {
  double intDim = 1.0;
  double v = 0.0;
  double L = 1.0;
  std::optional<double> muMax;
};

/// Spectral norm of a triplet coefficient.
double coefficient_norm(const CoefficientMatrix& b, std::size_t d1, std::size_t d2);

/// Sum_k B_k B_k^T (rows) and Sum_k B_k^T B_k (cols).
DenseMatrix series_gram_rows(const SeriesCoefficients& series);
DenseMatrix series_gram_cols(const SeriesCoefficients& series);

VarianceStats series_variance(const SeriesCoefficients& series);
VarianceStats signed_matrix_variance(const DenseMatrix& b);

inline constexpr int kWeakVarianceRestarts = 8;
/// Lower bound on sup_{|u|=|w|=1} Sum_k (u^T B_k w)^2 by alternating maximization.
double weak_variance_approx(const SeriesCoefficients& series, int restarts = kWeakVarianceRestarts);

ChernoffStats chernoff_stats(const std::vector<SymmetricMatrix>& summandMeans, double L);

struct SamplerModel;
struct SamplerMoments {
  double m2 = 0.0;
  double L = 0.0;
};
SamplerMoments sampler_moments(const SamplerModel& model);

/// Biased (1/n) estimate of v = max(|E ZZ^T|, |E Z^T Z|) after centering.
VarianceStats empirical_variance(const std::vector<DenseMatrix>& samples);

}  // namespace concentrix
