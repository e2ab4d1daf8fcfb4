#include "concentrix/summation.hpp"

#include "concentrix/error.hpp"

namespace concentrix {

double pairwise_sum(const std::vector<double>& values, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(values, 0, values.size());
}

namespace {

DenseMatrix sum_range(const std::vector<DenseMatrix>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  DenseMatrix left = sum_range(terms, lo, mid);
  left += sum_range(terms, mid, hi);
  return left;
}

}  // namespace

DenseMatrix pairwise_sum(const std::vector<DenseMatrix>& terms) {
  if (terms.empty()) fail(ErrorCode::InvalidInput, "empty sum");
  return sum_range(terms, 0, terms.size());
}

}  // namespace concentrix
