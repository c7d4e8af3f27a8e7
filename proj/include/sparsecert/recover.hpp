#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sparsecert/matrix.hpp"

namespace sparsecert {

/// A test problem x = A s0 (+ noise of norm noise_norm).
struct ProblemInstance {
  Matrix dictionary;
  Vector s0;
  Vector x;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  double noise_norm = 0.0;
  /// Sorted support of s0; exactly p distinct indices.
  std::vector<std::size_t> support;
};

/// Dictionary entries iid N(0, 1), then optionally unit-normalized columns.
/// Support uniform without replacement, nonzero values N(0, 1), and for
/// epsilon > 0 a noise vector uniform in direction with norm exactly epsilon.
/// Throws InvalidInputError for p > m or m <= n.
ProblemInstance make_instance(std::size_t n, std::size_t m, std::size_t p, double epsilon,
                              std::uint64_t seed, bool normalize_columns);

/// Writes `<prefix>.matrix` (matrix text format), `<prefix>.x` and
/// `<prefix>.s0` (one value per line) and `<prefix>.json` with seed, p,
/// epsilon, support and the nonzero values of s0.
void write_instance(const std::string& prefix, const ProblemInstance& inst);
ProblemInstance read_instance(const std::string& prefix);

/// Minimum-norm solver and affine projector for a full-row-rank A, built on a
/// Householder QR factorization of A^T.
class MinNormProjector {
 public:
  /// Throws SingularityError when A is numerically rank deficient.
  explicit MinNormProjector(const Matrix& a);

  /// A^+ x.
  Vector solve(std::span<const double> x) const;
  /// s - A^+ (A s - x): the closest point to s on {s : A s = x}.
  Vector project(std::span<const double> s, std::span<const double> x) const;

 private:
  Matrix a_;
  Matrix qr_;  // m x n; R above the diagonal, Householder vectors below
  Vector tau_;
  Vector rdiag_;
};

/// A^+ x.
Vector min_l2_solve(const Matrix& a, std::span<const double> x);

struct Sl0Options {
  double sigma_min = 1e-3;
  double sigma_decrease = 0.5;
  int inner_iters = 3;
  double mu = 2.0;
};

/// Smoothed-l0 recovery. Starts at A^+ x with sigma = 2 max|s|, takes
/// inner_iters projected ascent steps on sum exp(-s_i^2 / 2 sigma^2) per
/// sigma level, and shrinks sigma by sigma_decrease, clamped so that the
/// final level runs at exactly sigma_min. The result satisfies
/// ||A s - x|| <= 1e-10 ||x||.
Vector sl0_solve(const Matrix& a, std::span<const double> x, const Sl0Options& opts = {});

/// Plugin seam for alternative sparse solvers.
using SparseSolver = std::function<Vector(const Matrix&, std::span<const double>)>;

SparseSolver sl0_solver(Sl0Options opts = {});

}  // namespace sparsecert
