#include "rku/matrix_market.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rku {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::io_error, "empty Matrix Market stream");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw Error(ErrorCode::io_error, "missing %%MatrixMarket matrix banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  const bool complex = field == "complex";
  if (!complex && field != "real" && field != "integer" && field != "double") {
    throw Error(ErrorCode::io_error, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric") {
    throw Error(ErrorCode::io_error, "unsupported symmetry '" + symmetry + "'");
  }

  std::string line;
  if (!next_data_line(in, line)) throw Error(ErrorCode::io_error, "missing size line");
  std::istringstream size_line(line);
  Index rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows < 0 || cols < 0) throw Error(ErrorCode::io_error, "bad size line");
  if (symmetry != "general" && rows != cols) throw Error(ErrorCode::io_error, "symmetric storage needs a square matrix");

  Matrix a = Matrix::Zero(rows, cols);
  auto read_value = [&](std::istringstream& ls) {
    double re = 0.0, im = 0.0;
    ls >> re;
    if (complex) ls >> im;
    if (!ls) throw Error(ErrorCode::io_error, "bad entry: " + line);
    return Scalar(re, im);
  };
  auto place = [&](Index i, Index j, Scalar v) {
    a(i, j) = v;
    if (i == j) return;
    if (symmetry == "symmetric") a(j, i) = v;
    if (symmetry == "hermitian") a(j, i) = std::conj(v);
    if (symmetry == "skew-symmetric") a(j, i) = -v;
  };

  if (format == "array") {
    for (Index j = 0; j < cols; ++j) {
      const Index start = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (Index i = start; i < rows; ++i) {
        if (!next_data_line(in, line)) throw Error(ErrorCode::io_error, "array data ended early");
        std::istringstream ls(line);
        place(i, j, read_value(ls));
      }
    }
  } else if (format == "coordinate") {
    for (Index k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) throw Error(ErrorCode::io_error, "coordinate data ended early");
      std::istringstream ls(line);
      Index i = 0, j = 0;
      ls >> i >> j;
      if (!ls || i < 1 || j < 1 || i > rows || j > cols) throw Error(ErrorCode::io_error, "bad coordinate entry: " + line);
      place(i - 1, j - 1, read_value(ls));
    }
  } else {
    throw Error(ErrorCode::io_error, "unsupported format '" + format + "'");
  }
  return a;
}

Matrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& a) {
  out << "%%MatrixMarket matrix array complex general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) out << a(i, j).real() << ' ' << a(i, j).imag() << '\n';
  }
}

void write_matrix_market_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  write_matrix_market(out, a);
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

}  // namespace rku
