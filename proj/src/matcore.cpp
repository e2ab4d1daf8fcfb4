#include "concentrix/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "concentrix/error.hpp"
#include "eigen_bridge.hpp"

namespace concentrix {

using detail::view;

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols)
    fail(ErrorCode::ShapeMismatch, "entry count " + std::to_string(entries_.size()) +
                                       " does not match " + std::to_string(rows) + "x" +
                                       std::to_string(cols));
  if (!all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> e;
  e.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::ShapeMismatch, "ragged rows");
    e.insert(e.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(e));
}

DenseMatrix DenseMatrix::column(const std::vector<double>& v) {
  return DenseMatrix(v.size(), 1, v);
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  if (!m.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return std::isfinite(x); });
}

static void check_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::ShapeMismatch, "matrix shapes differ");
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  check_same_shape(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  check_same_shape(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& x : entries_) x *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimMismatch, "inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

DenseMatrix gram_rows(const DenseMatrix& b) {
  DenseMatrix out(b.rows(), b.rows());
  view(out).noalias() = view(b) * view(b).transpose();
  return out;
}

DenseMatrix gram_cols(const DenseMatrix& b) {
  DenseMatrix out(b.cols(), b.cols());
  view(out).noalias() = view(b).transpose() * view(b);
  return out;
}

SymmetricMatrix::SymmetricMatrix(const DenseMatrix& a) : a_(a) {
  if (a.rows() != a.cols()) fail(ErrorCode::ShapeMismatch, "symmetric matrix must be square");
  if (!a.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  const double tol = kSymTol * std::max(1.0, frobenius_norm(a));
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol)
        fail(ErrorCode::InvalidInput, "matrix is not symmetric");
      const double m = 0.5 * (a(i, j) + a(j, i));
      a_(i, j) = m;
      a_(j, i) = m;
    }
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : a_(dim, dim) {}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  return SymmetricMatrix(DenseMatrix::identity(n));
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& diag) {
  return SymmetricMatrix(DenseMatrix::diagonal(diag));
}

SymmetricMatrix SymmetricMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  return SymmetricMatrix(DenseMatrix::from_rows(rows));
}

bool SymmetricMatrix::is_diagonal() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && a_(i, j) != 0.0) return false;
  return true;
}

SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return SymmetricMatrix(a.dense() + b.dense());
}
SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return SymmetricMatrix(a.dense() - b.dense());
}
SymmetricMatrix operator*(double s, const SymmetricMatrix& a) {
  return SymmetricMatrix(s * a.dense());
}

namespace {

SpectralSummary summarize(std::vector<double> values) {
  SpectralSummary s;
  std::sort(values.begin(), values.end(), std::greater<>());
  if (!values.empty()) s.spectralNorm = std::max(std::abs(values.front()), std::abs(values.back()));
  s.trace = std::accumulate(values.begin(), values.end(), 0.0);
  s.eigenvalues = std::move(values);
  return s;
}

Eigen::MatrixXd as_colmajor(const SymmetricMatrix& a) {
  // Symmetric storage reads identically in either order.
  return Eigen::Map<const Eigen::MatrixXd>(a.dense().data(), static_cast<Eigen::Index>(a.dim()),
                                           static_cast<Eigen::Index>(a.dim()));
}

}  // namespace

EigenDecomposition sym_eig(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_colmajor(a), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(ErrorCode::NumericalFailure, "eigensolver did not converge");
  EigenDecomposition out;
  std::vector<double> values(n);
  out.vectors = DenseMatrix(n, n);
  // Eigen sorts ascending; flip to decreasing.
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(n - 1 - k);
    values[k] = es.eigenvalues()(src);
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, k) = es.eigenvectors()(static_cast<Eigen::Index>(i), src);
  }
  out.summary = summarize(std::move(values));
  return out;
}

SpectralSummary sym_eigvals(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return {};
  if (a.is_diagonal()) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
    return summarize(std::move(values));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_colmajor(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::NumericalFailure, "eigensolver did not converge");
  std::vector<double> values(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return summarize(std::move(values));
}

double lambda_max(const SymmetricMatrix& a) { return sym_eigvals(a).eigenvalues.front(); }
double lambda_min(const SymmetricMatrix& a) { return sym_eigvals(a).eigenvalues.back(); }

double spectral_norm(const SymmetricMatrix& a) { return sym_eigvals(a).spectralNorm; }

double spectral_norm(const DenseMatrix& b) {
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  if (b.empty()) return 0.0;
  // top eigenvalue of the smaller Gram matrix; much cheaper than the dilation
  const DenseMatrix g = b.rows() <= b.cols() ? gram_rows(b) : gram_cols(b);
  return std::sqrt(std::max(0.0, sym_eigvals(SymmetricMatrix(g)).eigenvalues.front()));
}

std::vector<double> singular_values(const DenseMatrix& b) {
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  const std::size_t k = std::min(b.rows(), b.cols());
  if (k == 0) return {};
  auto values = sym_eigvals(hermitian_dilation(b)).eigenvalues;
  values.resize(k);
  for (double& s : values) s = std::max(0.0, s);
  return values;
}

double frobenius_norm(const DenseMatrix& b) {
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  return view(b).norm();
}

double entrywise_l1(const DenseMatrix& b) {
  if (!b.all_finite()) fail(ErrorCode::InvalidInput, "non-finite matrix entry");
  return view(b).cwiseAbs().sum();
}

double schatten1(const DenseMatrix& b) {
  const auto s = singular_values(b);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

double trace(const DenseMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::ShapeMismatch, "trace of non-square matrix");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

SymmetricMatrix hermitian_dilation(const DenseMatrix& b) {
  const std::size_t d1 = b.rows(), d2 = b.cols();
  DenseMatrix h(d1 + d2, d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j) {
      h(i, d1 + j) = b(i, j);
      h(d1 + j, i) = b(i, j);
    }
  return SymmetricMatrix(h);
}

double intrinsic_dim(const SymmetricMatrix& a, bool check_psd) {
  const auto s = sym_eigvals(a);
  if (s.spectralNorm == 0.0) fail(ErrorCode::ZeroMatrix, "intrinsic dimension of zero matrix");
  if (check_psd && s.eigenvalues.back() < -1e-10 * s.spectralNorm)
    fail(ErrorCode::NotPsd, "intrinsic dimension needs a PSD matrix");
  return s.trace / s.eigenvalues.front();
}

double stable_rank(const DenseMatrix& b) {
  const double f = frobenius_norm(b);
  if (f == 0.0) fail(ErrorCode::ZeroMatrix, "stable rank of zero matrix");
  const double n = spectral_norm(b);
  return (f * f) / (n * n);
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& h) {
  DenseMatrix out(a.rows() * h.rows(), a.cols() * h.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < h.rows(); ++k)
        for (std::size_t l = 0; l < h.cols(); ++l)
          out(i * h.rows() + k, j * h.cols() + l) = a(i, j) * h(k, l);
  return out;
}

SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& h) {
  return SymmetricMatrix(kron(a.dense(), h.dense()));
}

SymmetricMatrix reconstruct(const DenseMatrix& q, const std::vector<double>& values) {
  if (q.cols() != values.size()) fail(ErrorCode::DimMismatch, "eigenvalue count mismatch");
  detail::RowMat scaled = view(q);
  for (std::size_t k = 0; k < values.size(); ++k)
    scaled.col(static_cast<Eigen::Index>(k)) *= values[k];
  return SymmetricMatrix(detail::to_dense(scaled * view(q).transpose()));
}

}  // namespace concentrix
