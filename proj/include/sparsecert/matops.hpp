#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparsecert/matrix.hpp"

namespace sparsecert {

/// Singular values at or below this fraction of sigma_max are treated as zero.
inline constexpr double kRankTolerance = 1e-12;

/// Default cap on the number of subsets a single enumeration may visit.
inline constexpr double kDefaultSubsetBudget = 1e7;

/// Reads SPARSECERT_BUDGET from the environment, falling back to
/// kDefaultSubsetBudget when unset or unparsable.
double default_subset_budget();

/// Strictly increasing zero-based column indices into a parent matrix.
class ColumnSubset {
 public:
  /// Validates the invariants; throws InvalidInputError.
  ColumnSubset(std::vector<std::size_t> indices, std::size_t parent_cols);

  static ColumnSubset all(std::size_t parent_cols);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t parent_cols() const noexcept { return parent_cols_; }
  std::size_t size() const noexcept { return indices_.size(); }

  /// The remaining columns, also in increasing order. Empty when the subset
  /// covers every column, so this returns a plain index list.
  std::vector<std::size_t> complement() const;

  bool operator==(const ColumnSubset&) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t parent_cols_;
};

/// Singular values in descending order; always min(rows, cols) of them.
struct SingularSpectrum {
  std::vector<double> values;

  double max() const { return values.front(); }
  double min() const { return values.back(); }
  std::size_t size() const noexcept { return values.size(); }
};

/// All min(rows, cols) singular values via one-sided (Hestenes) Jacobi on the
/// tall orientation. A zero value signals rank deficiency.
SingularSpectrum singular_spectrum(const Matrix& m);

/// Test oracle: singular values from the closed-form roots of the
/// characteristic polynomial of the smaller Gram matrix. Short side <= 4.
SingularSpectrum oracle_spectrum(const Matrix& m);

/// Largest singular value by power iteration on the smaller Gram matrix.
/// Intended for matrices too large for a full Jacobi sweep.
double spectral_norm(const Matrix& m, int max_iter = 500, double rel_tol = 1e-13);

/// ||M^+||_F = sqrt(sum 1/sigma_i^2). Throws SingularityError when M is not of
/// full rank (within kRankTolerance).
double pseudoinverse_frobenius(const Matrix& m);

/// Submatrix made of the listed columns, in the given order.
Matrix take_columns(const Matrix& m, const std::vector<std::size_t>& columns);
Matrix take_columns(const Matrix& m, const ColumnSubset& subset);

/// C(n, k) as a double; exact while the value fits in 53 bits, computed from
/// log-gamma beyond that.
double binomial(std::size_t n, std::size_t k);
double log_binomial(std::size_t n, std::size_t k);

/// Lexicographic stream over every j-subset of {0, .., cols-1}.
///
///   SubsetEnumerator it(5, 2);
///   do { use(it.current()); } while (it.advance());
class SubsetEnumerator {
 public:
  /// Throws InvalidInputError unless 1 <= j <= cols, and BudgetExceededError
  /// when C(cols, j) > budget.
  SubsetEnumerator(std::size_t cols, std::size_t j, double budget = kDefaultSubsetBudget);

  const std::vector<std::size_t>& current() const noexcept { return idx_; }
  ColumnSubset subset() const { return ColumnSubset(idx_, cols_); }
  /// Zero-based position of current() in the lexicographic order.
  std::uint64_t rank() const noexcept { return rank_; }
  /// Moves to the next subset; false once the stream is exhausted.
  bool advance();

  double count() const noexcept { return count_; }

 private:
  std::size_t cols_;
  std::vector<std::size_t> idx_;
  std::uint64_t rank_ = 0;
  double count_;
};

/// Collects every subset of an enumeration. Mostly for tests and small inputs.
std::vector<ColumnSubset> enumerate_subsets(std::size_t cols, std::size_t j,
                                            double budget = kDefaultSubsetBudget);

}  // namespace sparsecert
