#include "concentrix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "concentrix/error.hpp"
#include "concentrix/models.hpp"
#include "concentrix/summation.hpp"

namespace concentrix {

CoefficientMatrix CoefficientMatrix::from_dense(const DenseMatrix& b) {
  CoefficientMatrix c;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (b(i, j) != 0.0)
        c.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), b(i, j)});
  return c;
}

DenseMatrix CoefficientMatrix::to_dense(std::size_t d1, std::size_t d2) const {
  DenseMatrix b(d1, d2);
  for (const auto& e : entries) b(e.row, e.col) += e.value;
  return b;
}

SeriesCoefficients::SeriesCoefficients(std::size_t d1, std::size_t d2, Modulator modulator)
    : d1_(d1), d2_(d2), modulator_(modulator) {
  if (d1 == 0 || d2 == 0) fail(ErrorCode::InvalidInput, "series dimensions must be positive");
}

SeriesCoefficients::SeriesCoefficients(const std::vector<DenseMatrix>& coeffs, Modulator modulator)
    : d1_(coeffs.empty() ? 0 : coeffs.front().rows()),
      d2_(coeffs.empty() ? 0 : coeffs.front().cols()),
      modulator_(modulator) {
  if (coeffs.empty()) fail(ErrorCode::InvalidInput, "empty coefficient list");
  for (const auto& b : coeffs) add(b);
}

void SeriesCoefficients::add(const DenseMatrix& b) {
  if (b.rows() != d1_ || b.cols() != d2_) fail(ErrorCode::ShapeMismatch, "coefficient shape differs");
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite coefficient");
  coeffs_.push_back(CoefficientMatrix::from_dense(b));
}

void SeriesCoefficients::add(CoefficientMatrix b) {
  for (const auto& e : b.entries)
    if (e.row >= d1_ || e.col >= d2_ || !std::isfinite(e.value))
      fail(ErrorCode::ShapeMismatch, "coefficient entry out of range");
  coeffs_.push_back(std::move(b));
}

bool SeriesCoefficients::symmetric() const {
  if (d1_ != d2_) return false;
  for (const auto& c : coeffs_) {
    const DenseMatrix b = c.to_dense(d1_, d2_);
    for (std::size_t i = 0; i < d1_; ++i)
      for (std::size_t j = i + 1; j < d2_; ++j)
        if (b(i, j) != b(j, i)) return false;
  }
  return true;
}

double coefficient_norm(const CoefficientMatrix& b, std::size_t d1, std::size_t d2) {
  std::vector<std::uint32_t> rows, cols;
  rows.reserve(b.entries.size());
  cols.reserve(b.entries.size());
  double maxabs = 0.0;
  for (const auto& e : b.entries) {
    rows.push_back(e.row);
    cols.push_back(e.col);
    maxabs = std::max(maxabs, std::abs(e.value));
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  const bool row_unique = std::adjacent_find(rows.begin(), rows.end()) == rows.end();
  const bool col_unique = std::adjacent_find(cols.begin(), cols.end()) == cols.end();
  // At most one entry per row and column: a scaled partial permutation.
  if (row_unique && col_unique) return maxabs;
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  if (rows.size() == d1 && cols.size() == d2) return spectral_norm(b.to_dense(d1, d2));
  DenseMatrix compact(rows.size(), cols.size());
  for (const auto& e : b.entries) {
    const auto i = std::lower_bound(rows.begin(), rows.end(), e.row) - rows.begin();
    const auto j = std::lower_bound(cols.begin(), cols.end(), e.col) - cols.begin();
    compact(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += e.value;
  }
  return spectral_norm(compact);
}

namespace {

// Accumulates Sum_k B_k B_k^T, or Sum_k B_k^T B_k when by_cols is set.
DenseMatrix series_gram(const SeriesCoefficients& series, bool by_cols) {
  const std::size_t n = by_cols ? series.d2() : series.d1();
  DenseMatrix g(n, n);
  std::vector<CoefficientMatrix::Entry> sorted;
  for (std::size_t k = 0; k < series.size(); ++k) {
    sorted = series.coefficient(k).entries;
    // Group by the contracted index.
    if (by_cols) {
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.row < b.row; });
    } else {
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.col < b.col; });
    }
    std::size_t lo = 0;
    while (lo < sorted.size()) {
      const auto key = by_cols ? sorted[lo].row : sorted[lo].col;
      std::size_t hi = lo;
      while (hi < sorted.size() && (by_cols ? sorted[hi].row : sorted[hi].col) == key) ++hi;
      for (std::size_t a = lo; a < hi; ++a)
        for (std::size_t b = lo; b < hi; ++b) {
          const auto ia = by_cols ? sorted[a].col : sorted[a].row;
          const auto ib = by_cols ? sorted[b].col : sorted[b].row;
          g(ia, ib) += sorted[a].value * sorted[b].value;
        }
      lo = hi;
    }
  }
  return g;
}

}  // namespace

DenseMatrix series_gram_rows(const SeriesCoefficients& series) { return series_gram(series, false); }
DenseMatrix series_gram_cols(const SeriesCoefficients& series) { return series_gram(series, true); }

VarianceStats series_variance(const SeriesCoefficients& series) {
  if (series.size() == 0) fail(ErrorCode::InvalidInput, "empty coefficient list");
  VarianceStats s;
  s.d1 = series.d1();
  s.d2 = series.d2();
  const double v1 = spectral_norm(SymmetricMatrix(series_gram_rows(series)));
  const double v2 = spectral_norm(SymmetricMatrix(series_gram_cols(series)));
  s.v = std::max(v1, v2);
  double L = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k)
    L = std::max(L, coefficient_norm(series.coefficient(k), series.d1(), series.d2()));
  s.L = L;
  return s;
}

VarianceStats signed_matrix_variance(const DenseMatrix& b) {
  VarianceStats s;
  s.d1 = b.rows();
  s.d2 = b.cols();
  double v = 0.0, L = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      r += b(i, j) * b(i, j);
      L = std::max(L, std::abs(b(i, j)));
    }
    v = std::max(v, r);
  }
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i) c += b(i, j) * b(i, j);
    v = std::max(v, c);
  }
  s.v = v;
  s.L = L;
  return s;
}

namespace {

// Sum_k (B_k x)(B_k x)^T, or with B_k^T when transpose is set. Returns the top
// eigenpair of that matrix.
std::pair<double, std::vector<double>> weak_step(const SeriesCoefficients& series,
                                                 const std::vector<double>& x, bool transpose) {
  const std::size_t n = transpose ? series.d2() : series.d1();
  DenseMatrix m(n, n);
  std::vector<double> y(n, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(n, 0);
  for (std::size_t k = 0; k < series.size(); ++k) {
    touched.clear();
    for (const auto& e : series.coefficient(k).entries) {
      const auto out = transpose ? e.col : e.row;
      const auto in = transpose ? e.row : e.col;
      if (!mark[out]) {
        mark[out] = 1;
        touched.push_back(out);
      }
      y[out] += e.value * x[in];
    }
    for (auto a : touched)
      for (auto b : touched) m(a, b) += y[a] * y[b];
    for (auto a : touched) {
      y[a] = 0.0;
      mark[a] = 0;
    }
  }
  const auto eig = sym_eig(SymmetricMatrix(m));
  std::vector<double> top(n);
  for (std::size_t i = 0; i < n; ++i) top[i] = eig.vectors(i, 0);
  return {eig.summary.eigenvalues.front(), top};
}

}  // namespace

double weak_variance_approx(const SeriesCoefficients& series, int restarts) {
  if (restarts < 1) fail(ErrorCode::ParameterRange, "restarts must be at least 1");
  if (series.size() == 0) fail(ErrorCode::InvalidInput, "empty coefficient list");
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    RandomStream rng(0x77656b76ULL, static_cast<std::uint64_t>(r));
    std::vector<double> w = rng.normal_vector(series.d2());
    double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    for (double& x : w) x /= norm;
    double prev = -1.0, value = 0.0;
    for (int it = 0; it < 500; ++it) {
      auto [vu, u] = weak_step(series, w, false);
      auto [vw, wn] = weak_step(series, u, true);
      value = std::max(vu, vw);
      w = std::move(wn);
      if (value - prev <= 1e-10 * std::max(1.0, value)) break;
      prev = value;
    }
    best = std::max(best, value);
  }
  return best;
}

ChernoffStats chernoff_stats(const std::vector<SymmetricMatrix>& summandMeans, double L) {
  if (summandMeans.empty()) fail(ErrorCode::InvalidInput, "no summand means");
  if (!(L > 0.0)) fail(ErrorCode::ParameterRange, "L must be positive");
  const std::size_t d = summandMeans.front().dim();
  std::vector<DenseMatrix> terms;
  terms.reserve(summandMeans.size());
  for (const auto& m : summandMeans) {
    if (m.dim() != d) fail(ErrorCode::DimMismatch, "summand means differ in dimension");
    terms.push_back(m.dense());
  }
  const auto s = sym_eigvals(SymmetricMatrix(pairwise_sum(terms)));
  if (s.eigenvalues.back() < -1e-10 * std::max(1.0, s.spectralNorm))
    fail(ErrorCode::NotPsd, "sum of means is not PSD");
  ChernoffStats c;
  c.muMax = std::max(0.0, s.eigenvalues.front());
  c.muMin = std::clamp(s.eigenvalues.back(), 0.0, c.muMax);
  c.L = L;
  c.dim = d;
  return c;
}

SamplerMoments sampler_moments(const SamplerModel& model) {
  switch (model.kind) {
    case ModelKind::sparsify: {
      const double f = frobenius_norm(model.B);
      const double dmax = static_cast<double>(std::max(model.B.rows(), model.B.cols()));
      return {2.0 * dmax * f * f, 2.0 * entrywise_l1(model.B)};
    }
    case ModelKind::rmm: {
      const double fb = frobenius_norm(model.B), fc = frobenius_norm(model.C);
      const double s = fb * fb + fc * fc;
      const double nb = spectral_norm(model.B), nc = spectral_norm(model.C);
      return {s * std::max(nb * nb, nc * nc), 0.5 * s};
    }
    case ModelKind::kernelFeatures: {
      const double bn = model.kernel.b() * static_cast<double>(model.kernel.size());
      return {bn * spectral_norm(model.target), bn};
    }
    case ModelKind::covariance: {
      return {model.truncation * spectral_norm(model.target), model.truncation};
    }
    default:
      fail(ErrorCode::UnsupportedModel, "no closed-form moments for " + to_string(model.kind));
  }
}

VarianceStats empirical_variance(const std::vector<DenseMatrix>& samples) {
  if (samples.size() < 2) fail(ErrorCode::TooFewSamples, "need at least two samples");
  const std::size_t d1 = samples.front().rows(), d2 = samples.front().cols();
  for (const auto& s : samples)
    if (s.rows() != d1 || s.cols() != d2) fail(ErrorCode::ShapeMismatch, "sample shapes differ");
  const double inv = 1.0 / static_cast<double>(samples.size());
  const DenseMatrix mean = inv * pairwise_sum(samples);
  std::vector<DenseMatrix> rows, cols;
  rows.reserve(samples.size());
  cols.reserve(samples.size());
  for (const auto& s : samples) {
    const DenseMatrix c = s - mean;
    rows.push_back(gram_rows(c));
    cols.push_back(gram_cols(c));
  }
  VarianceStats out;
  out.d1 = d1;
  out.d2 = d2;
  out.v = std::max(spectral_norm(SymmetricMatrix(inv * pairwise_sum(rows))),
                   spectral_norm(SymmetricMatrix(inv * pairwise_sum(cols))));
  return out;
}

}  // namespace concentrix
