#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sparsecert/matops.hpp"
#include "sparsecert/matrix.hpp"

namespace sparsecert {

/// Column norms within this distance of 1 mark a dictionary as normalized.
inline constexpr double kUnitNormTolerance = 1e-8;

/// An n x m dictionary (m > n) with cached column norms.
class Dictionary {
 public:
  /// Throws InvalidInputError unless cols > rows >= 1.
  explicit Dictionary(Matrix a);

  const Matrix& matrix() const noexcept { return a_; }
  std::size_t n() const noexcept { return a_.rows(); }
  std::size_t m() const noexcept { return a_.cols(); }
  const std::vector<double>& column_norms() const noexcept { return norms_; }
  bool is_normalized() const noexcept { return normalized_; }

 private:
  Matrix a_;
  std::vector<double> norms_;
  bool normalized_;
};

/// Options shared by every combinatorial scan.
struct ScanOptions {
  double budget = kDefaultSubsetBudget;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct KruskalRank {
  std::size_t q = 0;
  /// q + 1 when a dependent set was witnessed, otherwise min(n, m) + 1.
  std::size_t spark = 0;
  bool spark_witnessed = false;
  /// False when the budget stopped the scan; q is then a certified lower bound.
  bool complete = true;
  /// The most nearly dependent subset of size spark, if one was witnessed.
  std::optional<ColumnSubset> dependent_witness;
};

/// Largest q such that every q columns are linearly independent. Never throws
/// on budget exhaustion; the result is flagged incomplete instead.
KruskalRank kruskal_rank(const Matrix& a, const ScanOptions& opts = {});

/// Extremum over a family of column subsets together with its witness (the
/// lexicographically first subset attaining it).
struct SubsetExtreme {
  double value;
  ColumnSubset witness;
};

/// min over all j-column submatrices B of sigma_min(B).
SubsetExtreme sigma_min_j(const Matrix& a, std::size_t j, const ScanOptions& opts = {});

/// max over all j-column submatrices B of sigma_max(B^c) / sigma_min(B).
/// Throws PreconditionError naming q when j exceeds the Kruskal rank.
SubsetExtreme eta_j(const Matrix& a, std::size_t j, const ScanOptions& opts = {});

/// The dictionary constants driving every deterministic bound.
struct SpectralProfile {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t spark = 0;
  bool normalized = false;
  /// Entries are indexed by j - 1, for j = 1..depth.
  std::vector<double> sigma_min_seq;
  std::vector<double> eta_seq;
  std::vector<double> gamma_seq;
  std::vector<double> gamma_bar_seq;
  std::vector<double> gamma_bar_prime_seq;
  std::vector<ColumnSubset> sigma_min_witness;
  std::vector<ColumnSubset> eta_witness;

  std::size_t depth() const noexcept { return sigma_min_seq.size(); }
  double sigma_min(std::size_t j) const { return sigma_min_seq.at(j - 1); }
  double eta(std::size_t j) const { return eta_seq.at(j - 1); }
  double gamma(std::size_t j) const { return gamma_seq.at(j - 1); }
  double gamma_bar(std::size_t j) const { return gamma_bar_seq.at(j - 1); }
  double gamma_bar_prime(std::size_t j) const { return gamma_bar_prime_seq.at(j - 1); }
};

/// Computes sigma_min^(j), eta_j, gamma_j and their running maxima for
/// j = 1..depth. depth = 0 means q. Throws PreconditionError if depth > q and
/// BudgetExceededError if a level (or the Kruskal scan) is too large.
SpectralProfile gamma_profile(const Dictionary& dict, std::size_t depth = 0,
                              const ScanOptions& opts = {});

/// Same as gamma_profile but reuses an already computed Kruskal rank.
SpectralProfile gamma_profile(const Dictionary& dict, const KruskalRank& rank,
                              std::size_t depth, const ScanOptions& opts = {});

/// G_A: max of ||B^+||_F over every submatrix with at most n columns.
/// Requires the unique representation property (q = n).
double g_constant(const Matrix& a, const ScanOptions& opts = {});

/// Per-subset spectral data (sigma_min(B), sigma_max(B^c)) for every B with
/// 1..ell columns, in (j, lexicographic) order. The noisy tight bound needs
/// all of them because its maximiser depends on the noise level.
struct PartitionEntry {
  std::size_t j;
  double sigma_min_b;
  double sigma_max_bc;
};

struct PartitionTable {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t ell = 0;
  bool normalized = false;
  std::vector<PartitionEntry> entries;
};

/// Throws PreconditionError when some B with <= ell columns is rank deficient.
PartitionTable partition_table(const Dictionary& dict, std::size_t ell,
                               const ScanOptions& opts = {});

/// CSV: j,sigma_min_j,eta_j,gamma_j,gamma_bar_j,gamma_bar_prime_j
void write_profile_csv(std::ostream& out, const SpectralProfile& profile);

}  // namespace sparsecert
