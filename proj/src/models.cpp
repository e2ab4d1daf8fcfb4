#include "concentrix/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "concentrix/error.hpp"
#include "eigen_bridge.hpp"

namespace concentrix {

using detail::view;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sparsify: return "sparsify";
    case ModelKind::rmm: return "rmm";
    case ModelKind::kernelFeatures: return "kernelFeatures";
    case ModelKind::columnSubmatrix: return "columnSubmatrix";
    case ModelKind::rowColumnSubmatrix: return "rowColumnSubmatrix";
    case ModelKind::covariance: return "covariance";
    case ModelKind::erLaplacian: return "erLaplacian";
    case ModelKind::gaussianSeries: return "gaussianSeries";
    case ModelKind::maxqp: return "maxqp";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (auto k : {ModelKind::sparsify, ModelKind::rmm, ModelKind::kernelFeatures,
                 ModelKind::columnSubmatrix, ModelKind::rowColumnSubmatrix, ModelKind::covariance,
                 ModelKind::erLaplacian, ModelKind::gaussianSeries, ModelKind::maxqp})
    if (to_string(k) == name) return k;
  fail(ErrorCode::UnsupportedModel, "unknown model kind " + name);
}

namespace {

CoefficientMatrix single(std::size_t i, std::size_t j, double value) {
  CoefficientMatrix c;
  c.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), value});
  return c;
}

double squared_norm(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

}  // namespace

SeriesCoefficients make_wigner(std::size_t d, Modulator m) {
  SeriesCoefficients s(d, d, m);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      CoefficientMatrix c = single(j, k, 1.0);
      c.entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(j), 1.0});
      s.add(std::move(c));
    }
  // d = 1 has no off-diagonal pairs; keep the list nonempty with a zero term.
  if (s.size() == 0) s.add(CoefficientMatrix{});
  return s;
}

SeriesCoefficients make_rect_gaussian(std::size_t d1, std::size_t d2) {
  SeriesCoefficients s(d1, d2, Modulator::gaussian);
  for (std::size_t j = 0; j < d1; ++j)
    for (std::size_t k = 0; k < d2; ++k) s.add(single(j, k, 1.0));
  return s;
}

SeriesCoefficients make_signed(const DenseMatrix& b) {
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  SeriesCoefficients s(b.rows(), b.cols(), Modulator::rademacher);
  for (std::size_t j = 0; j < b.rows(); ++j)
    for (std::size_t k = 0; k < b.cols(); ++k)
      if (b(j, k) != 0.0) s.add(single(j, k, b(j, k)));
  if (s.size() == 0) s.add(CoefficientMatrix{});
  return s;
}

SeriesCoefficients make_toeplitz(std::size_t d) {
  SeriesCoefficients s(d, d, Modulator::gaussian);
  CoefficientMatrix id;
  for (std::size_t i = 0; i < d; ++i)
    id.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), 1.0});
  s.add(std::move(id));
  for (std::size_t k = 1; k < d; ++k) {
    CoefficientMatrix up, down;  // C^k and its transpose
    for (std::size_t i = 0; i + k < d; ++i) {
      up.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + k), 1.0});
      down.entries.push_back({static_cast<std::uint32_t>(i + k), static_cast<std::uint32_t>(i), 1.0});
    }
    s.add(std::move(up));
    s.add(std::move(down));
  }
  return s;
}

DenseMatrix sample_series(const SeriesCoefficients& series, RandomStream& rng) {
  DenseMatrix z(series.d1(), series.d2());
  const bool gauss = series.modulator() == Modulator::gaussian;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double zeta = gauss ? rng.normal() : rng.rademacher();
    for (const auto& e : series.coefficient(k).entries) z(e.row, e.col) += zeta * e.value;
  }
  return z;
}

double maxqp_alpha(std::size_t d1, std::size_t d2) {
  return 1.0 / std::sqrt(2.0 * std::log(static_cast<double>(d1 + d2)));
}

void check_maxqp_constraints(const std::vector<DenseMatrix>& bs) {
  if (bs.empty()) fail(ErrorCode::InvalidInput, "no blocks");
  DenseMatrix rows(bs.front().rows(), bs.front().rows());
  DenseMatrix cols(bs.front().cols(), bs.front().cols());
  for (const auto& b : bs) {
    if (b.rows() != rows.rows() || b.cols() != cols.rows())
      fail(ErrorCode::ShapeMismatch, "block shapes differ");
    rows += gram_rows(b);
    cols += gram_cols(b);
  }
  if (lambda_max(SymmetricMatrix(rows)) > 1.0 + 1e-8 || lambda_max(SymmetricMatrix(cols)) > 1.0 + 1e-8)
    fail(ErrorCode::ConstraintViolated, "blocks violate the semidefinite constraints");
}

DenseMatrix maxqp_round(const std::vector<DenseMatrix>& bs, RandomStream& rng) {
  check_maxqp_constraints(bs);
  DenseMatrix z(bs.front().rows(), bs.front().cols());
  for (const auto& b : bs) {
    const double s = rng.rademacher();
    for (std::size_t i = 0; i < b.entries().size(); ++i) z.entries()[i] += s * b.entries()[i];
  }
  return maxqp_alpha(z.rows(), z.cols()) * z;
}

SamplerModel sparsify_model(const DenseMatrix& b) {
  const double f = frobenius_norm(b);
  const double l1 = entrywise_l1(b);
  if (f == 0.0) fail(ErrorCode::ZeroMatrix, "cannot sparsify the zero matrix");
  SamplerModel m;
  m.kind = ModelKind::sparsify;
  m.B = b;
  m.target = b;
  m.probabilities.resize(b.entries().size());
  for (std::size_t i = 0; i < b.entries().size(); ++i) {
    const double x = b.entries()[i];
    m.probabilities[i] = 0.5 * (x * x / (f * f) + std::abs(x) / l1);
  }
  m.alias = AliasTable(m.probabilities);
  return m;
}

SamplerModel rmm_model(const DenseMatrix& b, const DenseMatrix& c) {
  if (b.cols() != c.rows()) fail(ErrorCode::DimMismatch, "inner dimensions differ");
  const double fb = frobenius_norm(b), fc = frobenius_norm(c);
  const double total = fb * fb + fc * fc;
  if (total == 0.0) fail(ErrorCode::ZeroMatrix, "both factors are zero");
  SamplerModel m;
  m.kind = ModelKind::rmm;
  m.B = b;
  m.C = c;
  m.target = multiply(b, c);
  m.probabilities.assign(b.cols(), 0.0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i) s += b(i, j) * b(i, j);
    for (std::size_t k = 0; k < c.cols(); ++k) s += c(j, k) * c(j, k);
    m.probabilities[j] = s / total;
  }
  m.alias = AliasTable(m.probabilities);
  return m;
}

SamplerModel kernel_features_model(const KernelSpec& spec) {
  SamplerModel m;
  m.kind = ModelKind::kernelFeatures;
  m.kernel = spec;
  m.target = kernel_matrix(spec).dense();
  return m;
}

SamplerModel column_submatrix_model(const DenseMatrix& b, double p) {
  if (!(p >= 0.0 && p <= static_cast<double>(b.cols())))
    fail(ErrorCode::ParameterRange, "p must lie in [0, n]");
  SamplerModel m;
  m.kind = ModelKind::columnSubmatrix;
  m.B = b;
  m.p = p;
  m.target = (p / static_cast<double>(b.cols())) * b;
  return m;
}

SamplerModel row_column_submatrix_model(const DenseMatrix& b, double p, double r) {
  if (!(p >= 0.0 && p <= static_cast<double>(b.rows())) ||
      !(r >= 0.0 && r <= static_cast<double>(b.cols())))
    fail(ErrorCode::ParameterRange, "p must lie in [0, d] and r in [0, n]");
  SamplerModel m;
  m.kind = ModelKind::rowColumnSubmatrix;
  m.B = b;
  m.p = p;
  m.r = r;
  m.target = (p / static_cast<double>(b.rows()) * r / static_cast<double>(b.cols())) * b;
  return m;
}

SamplerModel covariance_model(const DenseMatrix& aHalf, double truncationB) {
  SamplerModel m;
  m.kind = ModelKind::covariance;
  m.B = aHalf;
  m.target = gram_rows(aHalf);
  m.truncation = truncationB;
  if (!(truncationB >= lambda_max(SymmetricMatrix(m.target))))
    fail(ErrorCode::ParameterRange, "truncation level below the top eigenvalue");
  return m;
}

SamplerModel er_laplacian_model(std::size_t n, double p) {
  if (n < 2 || !(p >= 0.0 && p <= 1.0)) fail(ErrorCode::ParameterRange, "need n >= 2 and p in [0,1]");
  SamplerModel m;
  m.kind = ModelKind::erLaplacian;
  m.vertices = n;
  m.p = p;
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = i == j ? p * static_cast<double>(n - 1) : -p;
  m.target = t;
  return m;
}

SamplerModel gaussian_series_model(const SeriesCoefficients& series) {
  SamplerModel m;
  m.kind = ModelKind::gaussianSeries;
  m.series = series;
  m.target = DenseMatrix(series.d1(), series.d2());
  return m;
}

SamplerModel maxqp_model(const std::vector<DenseMatrix>& bs) {
  check_maxqp_constraints(bs);
  SamplerModel m;
  m.kind = ModelKind::maxqp;
  m.blocks = bs;
  m.target = DenseMatrix(bs.front().rows(), bs.front().cols());
  return m;
}

DenseMatrix draw(const SamplerModel& model, RandomStream& rng) {
  switch (model.kind) {
    case ModelKind::sparsify: {
      const std::size_t idx = model.alias.sample(rng);
      DenseMatrix r(model.B.rows(), model.B.cols());
      r.entries()[idx] = model.B.entries()[idx] / model.probabilities[idx];
      return r;
    }
    case ModelKind::rmm: {
      const std::size_t j = model.alias.sample(rng);
      DenseMatrix r(model.B.rows(), model.C.cols());
      const double w = 1.0 / model.probabilities[j];
      for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t k = 0; k < r.cols(); ++k) r(i, k) = w * model.B(i, j) * model.C(j, k);
      return r;
    }
    case ModelKind::kernelFeatures: {
      const auto z = feature_vector(model.kernel, rng);
      DenseMatrix r(z.size(), z.size());
      for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t k = 0; k < z.size(); ++k) r(i, k) = z[i] * z[k];
      return r;
    }
    case ModelKind::columnSubmatrix:
      return column_submatrix(model.B, model.p, rng);
    case ModelKind::rowColumnSubmatrix:
      return row_column_submatrix(model.B, model.p, model.r, rng);
    case ModelKind::covariance: {
      const auto x = covariance_vector(model, rng);
      DenseMatrix r(x.size(), x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < x.size(); ++k) r(i, k) = x[i] * x[k];
      return r;
    }
    case ModelKind::erLaplacian:
      return er_laplacian(model.vertices, model.p, rng).dense();
    case ModelKind::gaussianSeries:
      return sample_series(*model.series, rng);
    case ModelKind::maxqp:
      return maxqp_round(model.blocks, rng);
  }
  fail(ErrorCode::UnsupportedModel, "unknown model kind");
}

DenseMatrix sample_estimator(const SamplerModel& model, std::size_t n, RandomStream& rng) {
  if (n == 0) fail(ErrorCode::ParameterRange, "n must be positive");
  const double inv = 1.0 / static_cast<double>(n);
  switch (model.kind) {
    case ModelKind::sparsify: {
      DenseMatrix r(model.B.rows(), model.B.cols());
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = model.alias.sample(rng);
        r.entries()[idx] += model.B.entries()[idx] / model.probabilities[idx];
      }
      return inv * r;
    }
    case ModelKind::rmm: {
      std::vector<double> weight(model.B.cols(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = model.alias.sample(rng);
        weight[j] += inv / model.probabilities[j];
      }
      detail::RowMat scaled = view(model.B);
      for (std::size_t j = 0; j < weight.size(); ++j)
        scaled.col(static_cast<Eigen::Index>(j)) *= weight[j];
      return detail::to_dense(scaled * view(model.C));
    }
    case ModelKind::kernelFeatures: {
      const std::size_t N = model.kernel.size();
      detail::RowMat z(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        const auto f = feature_vector(model.kernel, rng);
        for (std::size_t i = 0; i < N; ++i) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = f[i];
      }
      return detail::to_dense(inv * (z * z.transpose()));
    }
    case ModelKind::covariance:
      return sample_covariance(model, n, rng).dense();
    default: {
      DenseMatrix acc = draw(model, rng);
      for (std::size_t k = 1; k < n; ++k) acc += draw(model, rng);
      return inv * acc;
    }
  }
}

double kernel_entry(const KernelSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorCode::DimMismatch, "data points differ in dimension");
  if (spec.kind == KernelKind::angular) {
    const double nx = std::sqrt(squared_norm(x)), ny = std::sqrt(squared_norm(y));
    if (nx == 0.0 || ny == 0.0) fail(ErrorCode::InvalidInput, "angular kernel needs nonzero points");
    const double c = std::clamp(std::inner_product(x.begin(), x.end(), y.begin(), 0.0) / (nx * ny), -1.0, 1.0);
    return 1.0 - 2.0 * std::acos(c) / std::numbers::pi;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::exp(-spec.alpha * s / 2.0);
}

std::vector<double> feature_vector(const KernelSpec& spec, RandomStream& rng) {
  if (spec.points.empty()) fail(ErrorCode::InvalidInput, "no data points");
  const std::size_t dim = spec.points.front().size();
  std::vector<double> w = rng.normal_vector(dim);
  std::vector<double> z(spec.points.size());
  if (spec.kind == KernelKind::angular) {
    // Only the sign is used, so the normalization onto the sphere is implicit.
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double ip = std::inner_product(w.begin(), w.end(), spec.points[i].begin(), 0.0);
      z[i] = ip >= 0.0 ? 1.0 : -1.0;
    }
    return z;
  }
  const double sa = std::sqrt(spec.alpha);
  for (double& x : w) x *= sa;
  const double u = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double ip = std::inner_product(w.begin(), w.end(), spec.points[i].begin(), 0.0);
    z[i] = std::numbers::sqrt2 * std::cos(ip + u);
  }
  return z;
}

SymmetricMatrix kernel_matrix(const KernelSpec& spec) {
  if (spec.points.empty()) fail(ErrorCode::InvalidInput, "no data points");
  const std::size_t n = spec.points.size();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_entry(spec, spec.points[i], spec.points[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return SymmetricMatrix(g);
}

DenseMatrix column_submatrix(const DenseMatrix& b, double p, RandomStream& rng) {
  const double n = static_cast<double>(b.cols());
  if (!(p >= 0.0 && p <= n)) fail(ErrorCode::ParameterRange, "p must lie in [0, n]");
  DenseMatrix z(b.rows(), b.cols());
  for (std::size_t k = 0; k < b.cols(); ++k)
    if (rng.bernoulli(p / n))
      for (std::size_t i = 0; i < b.rows(); ++i) z(i, k) = b(i, k);
  return z;
}

DenseMatrix row_column_submatrix(const DenseMatrix& b, double p, double r, RandomStream& rng) {
  const double d = static_cast<double>(b.rows()), n = static_cast<double>(b.cols());
  if (!(p >= 0.0 && p <= d) || !(r >= 0.0 && r <= n))
    fail(ErrorCode::ParameterRange, "p must lie in [0, d] and r in [0, n]");
  std::vector<char> keep_row(b.rows()), keep_col(b.cols());
  for (auto& x : keep_row) x = rng.bernoulli(p / d);
  for (auto& x : keep_col) x = rng.bernoulli(r / n);
  DenseMatrix z(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t k = 0; k < b.cols(); ++k)
      if (keep_row[i] && keep_col[k]) z(i, k) = b(i, k);
  return z;
}

SymmetricMatrix er_laplacian(std::size_t n, double p, RandomStream& rng) {
  if (n < 2 || !(p >= 0.0 && p <= 1.0)) fail(ErrorCode::ParameterRange, "need n >= 2 and p in [0,1]");
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (rng.bernoulli(p)) {
        l(j, j) += 1.0;
        l(k, k) += 1.0;
        l(j, k) -= 1.0;
        l(k, j) -= 1.0;
      }
  return SymmetricMatrix(l);
}

SymmetricMatrix compress_laplacian(const SymmetricMatrix& laplacian) {
  const std::size_t n = laplacian.dim();
  if (n < 2) fail(ErrorCode::ParameterRange, "need n >= 2");
  // Householder reflector H = I - beta w w^T sending e/sqrt(n) to e_1.
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  w(0) -= 1.0;
  const double beta = 2.0 / w.squaredNorm();
  const Eigen::MatrixXd a = view(laplacian.dense());
  const Eigen::VectorXd aw = a * w;
  const double waw = w.dot(aw);
  const Eigen::MatrixXd h = a - beta * (w * aw.transpose()) - beta * (aw * w.transpose()) +
                            beta * beta * waw * (w * w.transpose());
  const auto m = static_cast<Eigen::Index>(n - 1);
  return SymmetricMatrix(detail::to_dense(h.bottomRightCorner(m, m)));
}

std::vector<double> covariance_vector(const SamplerModel& model, RandomStream& rng) {
  if (model.kind != ModelKind::covariance) fail(ErrorCode::UnsupportedModel, "not a covariance model");
  const std::size_t p = model.B.rows(), k = model.B.cols();
  std::vector<double> x(p);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const auto g = rng.normal_vector(k);
    for (std::size_t i = 0; i < p; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += model.B(i, j) * g[j];
      x[i] = s;
    }
    if (squared_norm(x) <= model.truncation) return x;
  }
  fail(ErrorCode::NumericalFailure, "rejection sampler exhausted its attempts");
}

SymmetricMatrix sample_covariance(const SamplerModel& model, std::size_t n, RandomStream& rng) {
  if (n == 0) fail(ErrorCode::ParameterRange, "n must be positive");
  const std::size_t p = model.B.rows();
  detail::RowMat xs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = covariance_vector(model, rng);
    for (std::size_t i = 0; i < p; ++i) xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x[i];
  }
  return SymmetricMatrix(detail::to_dense((1.0 / static_cast<double>(n)) * (xs * xs.transpose())));
}

}  // namespace concentrix
