#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace concentrix {

/// Rectangular real matrix, row-major, all entries finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix column(const std::vector<double>& v);
  static DenseMatrix diagonal(const std::vector<double>& diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  const std::vector<double>& entries() const noexcept { return entries_; }
  std::vector<double>& entries() noexcept { return entries_; }
  const double* data() const noexcept { return entries_.data(); }
  double* data() noexcept { return entries_.data(); }

  DenseMatrix transpose() const;
  bool all_finite() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);
/// Matrix product.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// B B^T
DenseMatrix gram_rows(const DenseMatrix& b);
/// B^T B
DenseMatrix gram_cols(const DenseMatrix& b);

inline constexpr double kSymTol = 1e-10;

/// Square matrix symmetric up to kSymTol * max(1, ||A||_F); stored symmetrized.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const DenseMatrix& a);
  explicit SymmetricMatrix(std::size_t dim);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(const std::vector<double>& diag);
  static SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const noexcept { return a_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }
  const DenseMatrix& dense() const noexcept { return a_; }
  bool is_diagonal() const;

 private:
  DenseMatrix a_;
};

SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b);
SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b);
SymmetricMatrix operator*(double s, const SymmetricMatrix& a);

struct SpectralSummary {
  std::vector<double> eigenvalues;  // weakly decreasing
  double spectralNorm = 0.0;
  double trace = 0.0;
};

struct EigenDecomposition {
  SpectralSummary summary;
  DenseMatrix vectors;  // column i pairs with eigenvalues[i]
};

EigenDecomposition sym_eig(const SymmetricMatrix& a);
/// Eigenvalues only; cheaper than sym_eig.
SpectralSummary sym_eigvals(const SymmetricMatrix& a);
double lambda_max(const SymmetricMatrix& a);
double lambda_min(const SymmetricMatrix& a);

double spectral_norm(const DenseMatrix& b);
double spectral_norm(const SymmetricMatrix& a);
/// Singular values in decreasing order, min(d1,d2) of them.
std::vector<double> singular_values(const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& b);
double entrywise_l1(const DenseMatrix& b);
double schatten1(const DenseMatrix& b);
double trace(const DenseMatrix& a);

SymmetricMatrix hermitian_dilation(const DenseMatrix& b);

/// tr(A)/||A|| for PSD A. Skips the PSD eigen-check when check_psd is false.
double intrinsic_dim(const SymmetricMatrix& a, bool check_psd = true);
double stable_rank(const DenseMatrix& b);

SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& h);
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& h);

/// Q diag(values) Q^T
SymmetricMatrix reconstruct(const DenseMatrix& q, const std::vector<double>& values);

}  // namespace concentrix
