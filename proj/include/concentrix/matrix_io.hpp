#pragma once

#include <iosfwd>
#include <string>

#include "concentrix/matcore.hpp"

namespace concentrix {

// Text format: "rows cols" on the first line, then one line per row of
// space-separated decimals. Written with 17 significant digits.
DenseMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const DenseMatrix& m);

DenseMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const DenseMatrix& m);

std::string format_double(double x);

}  // namespace concentrix
