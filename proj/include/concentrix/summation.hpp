#pragma once

#include <cstddef>
#include <vector>

#include "concentrix/matcore.hpp"

namespace concentrix {

/// Pairwise sum of values[lo, hi). The split points depend only on the range.
double pairwise_sum(const std::vector<double>& values, std::size_t lo, std::size_t hi);
double pairwise_sum(const std::vector<double>& values);

/// Pairwise sum of equally shaped matrices.
DenseMatrix pairwise_sum(const std::vector<DenseMatrix>& terms);

}  // namespace concentrix
