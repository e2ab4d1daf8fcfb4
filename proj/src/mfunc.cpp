#include "concentrix/mfunc.hpp"

#include <algorithm>
#include <cmath>

#include "concentrix/error.hpp"

namespace concentrix {

PositiveDefiniteMatrix::PositiveDefiniteMatrix(const SymmetricMatrix& a) : a_(a) {
  const auto s = sym_eigvals(a);
  const double lo = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back();
  if (!(lo > kPdTol * std::max(1.0, s.spectralNorm)))
    fail(ErrorCode::NotPd, "matrix is not positive definite");
  min_eig_ = lo;
}

SymmetricMatrix matrix_function(const MatrixFunctionSpec& spec, const SymmetricMatrix& a) {
  auto eig = sym_eig(a);
  std::vector<double> values = eig.summary.eigenvalues;
  for (double& x : values) {
    if (x < spec.lo || x > spec.hi)
      fail(ErrorCode::DomainViolation, "eigenvalue outside function domain");
    x = spec.scalarFn(x);
    if (!std::isfinite(x)) fail(ErrorCode::DomainViolation, "function value not finite");
  }
  return reconstruct(eig.vectors, values);
}

PositiveDefiniteMatrix matrix_exp(const SymmetricMatrix& a) {
  auto eig = sym_eig(a);
  if (!eig.summary.eigenvalues.empty() && eig.summary.eigenvalues.front() > kExpLimit)
    fail(ErrorCode::Overflow, "matrix exponential overflows");
  std::vector<double> values = eig.summary.eigenvalues;
  for (double& x : values) x = std::exp(x);
  const double lo = values.empty() ? 0.0 : values.back();
  if (!(lo > 0.0)) fail(ErrorCode::NumericalFailure, "matrix exponential underflows");
  return PositiveDefiniteMatrix(reconstruct(eig.vectors, values), lo);
}

SymmetricMatrix matrix_log(const PositiveDefiniteMatrix& a) {
  auto eig = sym_eig(a.base());
  std::vector<double> values = eig.summary.eigenvalues;
  for (double& x : values) {
    if (!(x > 0.0)) fail(ErrorCode::NotPd, "log of non-positive eigenvalue");
    x = std::log(x);
  }
  return reconstruct(eig.vectors, values);
}

double trace_exp(const SymmetricMatrix& a) {
  const auto s = sym_eigvals(a);
  if (!s.eigenvalues.empty() && s.eigenvalues.front() > kExpLimit)
    fail(ErrorCode::Overflow, "trace exponential overflows");
  double t = 0.0;
  for (double x : s.eigenvalues) t += std::exp(x);
  return t;
}

double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimMismatch, "dimensions differ");
  const auto& x = a.dense().entries();
  const auto& y = b.dense().entries();
  double t = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) t += x[i] * y[i];
  return t;
}

double relative_entropy(const PositiveDefiniteMatrix& a, const PositiveDefiniteMatrix& h) {
  if (a.dim() != h.dim()) fail(ErrorCode::DimMismatch, "dimensions differ");
  const SymmetricMatrix diff = matrix_log(a) - matrix_log(h);
  return trace_product(a.base(), diff) - trace(a.base().dense()) + trace(h.base().dense());
}

double lieb_trace_fn(const SymmetricMatrix& h, const PositiveDefiniteMatrix& a) {
  if (a.dim() != h.dim()) fail(ErrorCode::DimMismatch, "dimensions differ");
  return trace_exp(h + matrix_log(a));
}

double variational_trace_gap(const PositiveDefiniteMatrix& m, const PositiveDefiniteMatrix& t) {
  if (m.dim() != t.dim()) fail(ErrorCode::DimMismatch, "dimensions differ");
  const SymmetricMatrix diff = matrix_log(m) - matrix_log(t);
  return trace(m.base().dense()) - trace_product(t.base(), diff) - trace(t.base().dense());
}

double golden_thompson_gap(const SymmetricMatrix& a, const SymmetricMatrix& h) {
  if (a.dim() != h.dim()) fail(ErrorCode::DimMismatch, "dimensions differ");
  const auto ea = matrix_exp(a);
  const auto eh = matrix_exp(h);
  return trace_product(ea.base(), eh.base()) - trace_exp(a + h);
}

}  // namespace concentrix
