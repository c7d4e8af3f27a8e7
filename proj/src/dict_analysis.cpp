#include "sparsecert/dict_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <string>

#include "sparsecert/error.hpp"
#include "subset_scan.hpp"

namespace sparsecert {

using detail::MaxTracker;
using detail::MinTracker;

Dictionary::Dictionary(Matrix a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() <= a_.rows()) {
    throw InvalidInputError("a dictionary must be n x m with m > n >= 1, got " +
                            std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()));
  }
  norms_.resize(a_.cols());
  normalized_ = true;
  for (std::size_t c = 0; c < a_.cols(); ++c) {
    norms_[c] = a_.column_norm(c);
    if (std::abs(norms_[c] - 1.0) > kUnitNormTolerance) normalized_ = false;
  }
}

namespace {

struct LevelAcc {
  MinTracker sigma_min;  // sigma_min(B)
  MaxTracker eta;        // sigma_max(B^c) / sigma_min(B)
  MinTracker relative;   // sigma_min(B) / sigma_max(B); <= kRankTolerance means dependent

  void merge(const LevelAcc& o) {
    sigma_min.merge(o.sigma_min);
    eta.merge(o.eta);
    relative.merge(o.relative);
  }
};

bool is_dependent(const SingularSpectrum& s) {
  return s.max() == 0.0 || s.min() <= kRankTolerance * s.max();
}

LevelAcc scan_level(const Matrix& a, std::size_t j, bool with_eta, const ScanOptions& opts) {
  return detail::scan_subsets<LevelAcc>(
      a.cols(), j, opts.budget, opts.workers,
      [&](LevelAcc& acc, std::uint64_t rank, const std::vector<std::size_t>& idx) {
        const SingularSpectrum sb = singular_spectrum(take_columns(a, idx));
        const double smin = sb.min();
        const double smax = sb.max();
        acc.sigma_min.offer(smin, rank, idx);
        acc.relative.offer(smax == 0.0 ? 0.0 : smin / smax, rank, idx);
        if (with_eta) {
          const ColumnSubset b(idx, a.cols());
          const double bc_max = singular_spectrum(take_columns(a, b.complement())).max();
          acc.eta.offer(smin == 0.0 ? INFINITY : bc_max / smin, rank, idx);
        }
      });
}

[[noreturn]] void throw_beyond_q(const Matrix& a, std::size_t j, const char* what,
                                 const ScanOptions& opts) {
  const KruskalRank r = kruskal_rank(a, opts);
  throw PreconditionError(std::string(what) + " requires j <= q(A); got j = " +
                          std::to_string(j) + " but q = " + std::to_string(r.q) +
                          (r.complete ? "" : " (lower bound, scan incomplete)"));
}

}  // namespace

KruskalRank kruskal_rank(const Matrix& a, const ScanOptions& opts) {
  if (a.empty()) throw InvalidInputError("kruskal_rank: empty matrix");
  const std::size_t top = std::min(a.rows(), a.cols());
  KruskalRank out;
  for (std::size_t j = 1; j <= top; ++j) {
    LevelAcc acc;
    try {
      acc = scan_level(a, j, false, opts);
    } catch (const BudgetExceededError&) {
      out.q = j - 1;
      out.spark = top + 1;
      out.complete = false;
      return out;
    }
    if (acc.relative.value <= kRankTolerance) {
      out.q = j - 1;
      out.spark = j;
      out.spark_witnessed = true;
      out.dependent_witness = ColumnSubset(acc.relative.indices, a.cols());
      return out;
    }
  }
  out.q = top;
  out.spark = top + 1;
  // n + 1 vectors in R^n are always dependent.
  out.spark_witnessed = a.cols() > a.rows();
  return out;
}

SubsetExtreme sigma_min_j(const Matrix& a, std::size_t j, const ScanOptions& opts) {
  const LevelAcc acc = scan_level(a, j, false, opts);
  return {acc.sigma_min.value, ColumnSubset(acc.sigma_min.indices, a.cols())};
}

SubsetExtreme eta_j(const Matrix& a, std::size_t j, const ScanOptions& opts) {
  if (j >= a.cols()) {
    throw InvalidInputError("eta_j: j must leave at least one complementary column");
  }
  const LevelAcc acc = scan_level(a, j, true, opts);
  if (acc.relative.value <= kRankTolerance) throw_beyond_q(a, j, "eta_j", opts);
  return {acc.eta.value, ColumnSubset(acc.eta.indices, a.cols())};
}

SpectralProfile gamma_profile(const Dictionary& dict, std::size_t depth,
                              const ScanOptions& opts) {
  return gamma_profile(dict, kruskal_rank(dict.matrix(), opts), depth, opts);
}

SpectralProfile gamma_profile(const Dictionary& dict, const KruskalRank& rank,
                              std::size_t depth, const ScanOptions& opts) {
  const Matrix& a = dict.matrix();
  if (depth == 0) depth = rank.q;
  if (depth > rank.q || (depth == 0 && !rank.complete)) {
    if (!rank.complete) {
      throw BudgetExceededError("Kruskal rank scan stopped at q >= " + std::to_string(rank.q) +
                                    "; cannot certify depth " +
                                    std::to_string(std::max<std::size_t>(depth, 1)),
                                0.0, opts.budget);
    }
    throw PreconditionError("requested depth " + std::to_string(depth) +
                            " exceeds the Kruskal rank q = " + std::to_string(rank.q));
  }
  if (depth == 0) throw PreconditionError("Kruskal rank is 0: a column is zero");

  SpectralProfile p;
  p.n = dict.n();
  p.m = dict.m();
  p.q = rank.q;
  p.spark = rank.spark;
  p.normalized = dict.is_normalized();
  const double sqrt_m = std::sqrt(static_cast<double>(p.m));
  double gbar = 0.0;
  for (std::size_t j = 1; j <= depth; ++j) {
    const LevelAcc acc = scan_level(a, j, true, opts);
    const double eta = acc.eta.value;
    const double gamma = std::sqrt(static_cast<double>(p.m - j) * (1.0 + eta * eta));
    gbar = std::max(gbar, gamma);
    p.sigma_min_seq.push_back(acc.sigma_min.value);
    p.eta_seq.push_back(eta);
    p.gamma_seq.push_back(gamma);
    p.gamma_bar_seq.push_back(gbar);
    p.gamma_bar_prime_seq.push_back(std::max(sqrt_m, gbar));
    p.sigma_min_witness.emplace_back(acc.sigma_min.indices, p.m);
    p.eta_witness.emplace_back(acc.eta.indices, p.m);
  }
  return p;
}

double g_constant(const Matrix& a, const ScanOptions& opts) {
  const std::size_t n = a.rows();
  double total = 0.0;
  for (std::size_t j = 1; j <= n && j <= a.cols(); ++j) total += binomial(a.cols(), j);
  if (total > opts.budget) {
    throw BudgetExceededError("G_A needs " + format_exact(total) +
                                  " pseudoinverses, over the budget of " +
                                  format_exact(opts.budget),
                              total, opts.budget);
  }
  const KruskalRank rank = kruskal_rank(a, opts);
  if (!rank.complete || rank.q != n) {
    throw PreconditionError("G_A requires the unique representation property (q = n = " +
                            std::to_string(n) + "), got q = " + std::to_string(rank.q));
  }
  double best = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const MaxTracker t = detail::scan_subsets<MaxTracker>(
        a.cols(), j, opts.budget, opts.workers,
        [&](MaxTracker& acc, std::uint64_t r, const std::vector<std::size_t>& idx) {
          acc.offer(pseudoinverse_frobenius(take_columns(a, idx)), r, idx);
        });
    best = std::max(best, t.value);
  }
  return best;
}

namespace {

struct TableAcc {
  std::vector<std::pair<std::uint64_t, PartitionEntry>> rows;
  void merge(const TableAcc& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
};

}  // namespace

PartitionTable partition_table(const Dictionary& dict, std::size_t ell,
                               const ScanOptions& opts) {
  const Matrix& a = dict.matrix();
  if (ell < 1 || ell >= dict.m()) {
    throw InvalidInputError("partition_table: ell must lie in [1, m - 1]");
  }
  PartitionTable t;
  t.n = dict.n();
  t.m = dict.m();
  t.ell = ell;
  t.normalized = dict.is_normalized();
  for (std::size_t j = 1; j <= ell; ++j) {
    std::atomic<bool> dependent{false};
    TableAcc acc = detail::scan_subsets<TableAcc>(
        a.cols(), j, opts.budget, opts.workers,
        [&](TableAcc& out, std::uint64_t r, const std::vector<std::size_t>& idx) {
          const SingularSpectrum sb = singular_spectrum(take_columns(a, idx));
          const ColumnSubset b(idx, a.cols());
          const double bc_max = singular_spectrum(take_columns(a, b.complement())).max();
          out.rows.push_back({r, PartitionEntry{idx.size(), sb.min(), bc_max}});
          if (is_dependent(sb)) dependent.store(true);
        });
    if (dependent) throw_beyond_q(a, j, "partition_table", opts);
    std::sort(acc.rows.begin(), acc.rows.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& row : acc.rows) t.entries.push_back(row.second);
  }
  return t;
}

void write_profile_csv(std::ostream& out, const SpectralProfile& p) {
  out << "j,sigma_min_j,eta_j,gamma_j,gamma_bar_j,gamma_bar_prime_j\n";
  for (std::size_t j = 1; j <= p.depth(); ++j) {
    out << j << ',' << format_exact(p.sigma_min(j)) << ',' << format_exact(p.eta(j)) << ','
        << format_exact(p.gamma(j)) << ',' << format_exact(p.gamma_bar(j)) << ','
        << format_exact(p.gamma_bar_prime(j)) << '\n';
  }
}

}  // namespace sparsecert
