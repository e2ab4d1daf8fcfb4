#pragma once

#include <functional>
#include <limits>

#include "concentrix/matcore.hpp"

namespace concentrix {

struct MatrixFunctionSpec {
  std::function<double(double)> scalarFn;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

inline constexpr double kPdTol = 1e-12;
inline constexpr double kExpLimit = 700.0;

/// Symmetric matrix with lambda_min > kPdTol * max(1, ||A||).
class PositiveDefiniteMatrix {
 public:
  explicit PositiveDefiniteMatrix(const SymmetricMatrix& a);

  const SymmetricMatrix& base() const noexcept { return a_; }
  double min_eig() const noexcept { return min_eig_; }
  std::size_t dim() const noexcept { return a_.dim(); }

 private:
  PositiveDefiniteMatrix(SymmetricMatrix a, double min_eig) : a_(std::move(a)), min_eig_(min_eig) {}
  friend PositiveDefiniteMatrix matrix_exp(const SymmetricMatrix& a);

  SymmetricMatrix a_;
  double min_eig_ = 0.0;
};

SymmetricMatrix matrix_function(const MatrixFunctionSpec& spec, const SymmetricMatrix& a);

PositiveDefiniteMatrix matrix_exp(const SymmetricMatrix& a);
SymmetricMatrix matrix_log(const PositiveDefiniteMatrix& a);

double trace_exp(const SymmetricMatrix& a);

/// tr[A(log A - log H) - (A - H)]
double relative_entropy(const PositiveDefiniteMatrix& a, const PositiveDefiniteMatrix& h);

/// tr exp(H + log A)
double lieb_trace_fn(const SymmetricMatrix& h, const PositiveDefiniteMatrix& a);

/// tr M - tr[T log M - T log T + T]
double variational_trace_gap(const PositiveDefiniteMatrix& m, const PositiveDefiniteMatrix& t);

/// tr(e^A e^H) - tr e^(A+H)
double golden_thompson_gap(const SymmetricMatrix& a, const SymmetricMatrix& h);

/// tr(A B) for symmetric A, B.
double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b);

}  // namespace concentrix
