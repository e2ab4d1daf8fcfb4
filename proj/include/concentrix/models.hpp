#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "concentrix/matcore.hpp"
#include "concentrix/rng.hpp"
#include "concentrix/stats.hpp"

namespace concentrix {

enum class ModelKind {
  sparsify,
  rmm,
  kernelFeatures,
  columnSubmatrix,
  rowColumnSubmatrix,
  covariance,
  erLaplacian,
  gaussianSeries,
  maxqp,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

enum class KernelKind { angular, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double alpha = 1.0;  // rbf bandwidth
  std::vector<std::vector<double>> points;

  /// Bound on psi^2: 1 for the sign map, 2 for the sqrt(2) cos map.
  double b() const { return kind == KernelKind::angular ? 1.0 : 2.0; }
  std::size_t size() const { return points.size(); }
};

/// Description of a random matrix model or an unbiased estimator R of a target.
struct SamplerModel {
  ModelKind kind = ModelKind::sparsify;
  DenseMatrix target;  // E R, when the model has one
  DenseMatrix B;       // sparsify/submatrix input, rmm left factor, covariance A^{1/2}
  DenseMatrix C;       // rmm right factor
  std::vector<double> probabilities;
  AliasTable alias;
  KernelSpec kernel;
  double truncation = 0.0;  // covariance bound on |x|^2
  double p = 0.0;           // expected kept columns/rows, or ER edge probability
  double r = 0.0;           // expected kept columns for the row/column model
  std::size_t vertices = 0;
  std::optional<SeriesCoefficients> series;
  std::vector<DenseMatrix> blocks;
};

// Series constructors.
SeriesCoefficients make_wigner(std::size_t d, Modulator m = Modulator::gaussian);
SeriesCoefficients make_rect_gaussian(std::size_t d1, std::size_t d2);
SeriesCoefficients make_signed(const DenseMatrix& b);
SeriesCoefficients make_toeplitz(std::size_t d);

/// Sum_k zeta_k B_k with zeta_k standard normal or Rademacher.
DenseMatrix sample_series(const SeriesCoefficients& series, RandomStream& rng);

double maxqp_alpha(std::size_t d1, std::size_t d2);
/// Checks Sum B_k B_k^T <= I and Sum B_k^T B_k <= I.
void check_maxqp_constraints(const std::vector<DenseMatrix>& bs);
DenseMatrix maxqp_round(const std::vector<DenseMatrix>& bs, RandomStream& rng);

// Estimator models.
SamplerModel sparsify_model(const DenseMatrix& b);
SamplerModel rmm_model(const DenseMatrix& b, const DenseMatrix& c);
SamplerModel kernel_features_model(const KernelSpec& spec);
SamplerModel column_submatrix_model(const DenseMatrix& b, double p);
SamplerModel row_column_submatrix_model(const DenseMatrix& b, double p, double r);
SamplerModel covariance_model(const DenseMatrix& aHalf, double truncationB);
SamplerModel er_laplacian_model(std::size_t n, double p);
SamplerModel gaussian_series_model(const SeriesCoefficients& series);
SamplerModel maxqp_model(const std::vector<DenseMatrix>& bs);

/// One draw of R from the model.
DenseMatrix draw(const SamplerModel& model, RandomStream& rng);
/// (1/n) Sum_k R_k
DenseMatrix sample_estimator(const SamplerModel& model, std::size_t n, RandomStream& rng);

double kernel_entry(const KernelSpec& spec, const std::vector<double>& x,
                    const std::vector<double>& y);
std::vector<double> feature_vector(const KernelSpec& spec, RandomStream& rng);
SymmetricMatrix kernel_matrix(const KernelSpec& spec);

DenseMatrix column_submatrix(const DenseMatrix& b, double p, RandomStream& rng);
DenseMatrix row_column_submatrix(const DenseMatrix& b, double p, double r, RandomStream& rng);

SymmetricMatrix er_laplacian(std::size_t n, double p, RandomStream& rng);
SymmetricMatrix compress_laplacian(const SymmetricMatrix& laplacian);

/// Draw x = A^{1/2} g, redrawn until |x|^2 <= B.
std::vector<double> covariance_vector(const SamplerModel& model, RandomStream& rng);
SymmetricMatrix sample_covariance(const SamplerModel& model, std::size_t n, RandomStream& rng);

}  // namespace concentrix
