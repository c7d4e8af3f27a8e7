#include "sparsecert/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sparsecert/error.hpp"

namespace sparsecert {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInputError("matrix entry count " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidInputError("matrix has a non-finite entry");
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidInputError("ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

double Matrix::column_norm(std::size_t c) const {
  double s = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c) * (*this)(r, c);
  return std::sqrt(s);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidInputError("apply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

Vector Matrix::apply_transpose(std::span<const double> x) const {
  if (x.size() != rows_) throw InvalidInputError("apply_transpose: dimension mismatch");
  Vector y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) y[c] += (*this)(r, c) * x[r];
  return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw InvalidInputError("matrix product: dimension mismatch");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInputError("subtract: length mismatch");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

namespace {

double parse_real(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("not a number: '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError("non-finite value: '" + tok + "'");
  return v;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing matrix header");
  std::istringstream header(line);
  long long n = 0, m = 0;
  std::string extra;
  if (!(header >> n >> m) || (header >> extra)) {
    throw ParseError("header must be 'n m', got '" + line + "'");
  }
  if (n <= 0 || m <= 0) throw ParseError("matrix dimensions must be positive");
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n * m));
  for (long long r = 0; r < n; ++r) {
    do {
      if (!std::getline(in, line)) {
        throw ParseError("expected " + std::to_string(n) + " rows, got " + std::to_string(r));
      }
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream row(line);
    std::string tok;
    long long count = 0;
    while (row >> tok) {
      data.push_back(parse_real(tok));
      ++count;
    }
    if (count != m) {
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(count) +
                       " entries, expected " + std::to_string(m));
    }
  }
  return Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(m), std::move(data));
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_matrix(in);
}

std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_exact(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_matrix(out, m);
}

Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Vector v;
  std::string tok;
  while (in >> tok) v.push_back(parse_real(tok));
  if (v.empty()) throw ParseError("'" + path + "' holds no values");
  return v;
}

}  // namespace sparsecert
