#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sparsecert {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Entries are always finite.
class Matrix {
 public:
  Matrix() = default;
  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `entries`; throws InvalidInputError on a
  /// size mismatch or a non-finite entry.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  /// Builds from nested rows, e.g. {{1, 0, 1}, {0, 1, 1}}.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * cols_ + c];
  }

  std::span<const double> entries() const noexcept { return data_; }

  Vector column(std::size_t c) const;
  double column_norm(std::size_t c) const;
  Matrix transpose() const;

  /// y = M x
  Vector apply(std::span<const double> x) const;
  /// y = M^T x
  Vector apply_transpose(std::span<const double> x) const;
  Matrix operator*(const Matrix& rhs) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double norm2(std::span<const double> v);
Vector subtract(std::span<const double> a, std::span<const double> b);

/// Reads the text matrix format: a header line "n m" followed by n rows of
/// m whitespace-separated reals. Throws ParseError.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
/// Writes the same format with 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Reads whitespace-separated reals (one vector). Throws ParseError.
Vector read_vector_file(const std::string& path);

/// "%.17g" formatting used by every machine-readable output.
std::string format_exact(double v);

}  // namespace sparsecert
