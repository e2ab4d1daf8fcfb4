#include "concentrix/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "concentrix/error.hpp"

namespace concentrix {

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

DenseMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::InvalidInput, "missing matrix header");
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows <= 0 || cols <= 0)
    fail(ErrorCode::InvalidInput, "bad matrix header: " + line);
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) fail(ErrorCode::InvalidInput, "missing matrix row");
    std::istringstream row(line);
    std::string tok;
    long long count = 0;
    while (row >> tok) {
      double x = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(ErrorCode::InvalidInput, "bad matrix entry: " + tok);
      entries.push_back(x);
      ++count;
    }
    if (count != cols) fail(ErrorCode::InvalidInput, "row has wrong entry count");
  }
  return DenseMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                     std::move(entries));
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path);
  return read_matrix(in);
}

void save_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write " + path);
  write_matrix(out, m);
}

}  // namespace concentrix
