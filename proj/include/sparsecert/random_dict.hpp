#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sparsecert/matrix.hpp"

namespace sparsecert {

/// Shape of an n x m Gaussian dictionary with iid N(0, 1/n) entries.
struct RandomDictSpec {
  std::size_t n;
  std::size_t m;

  /// Throws InvalidInputError unless m > n >= 1.
  RandomDictSpec(std::size_t n, std::size_t m);
};

/// (1 + sqrt((m-j)/n) + r1) / (1 - sqrt(j/n) - r2). r1 = r2 = 0 gives the
/// limiting value eta[j]. Throws PreconditionError for j outside [1, n-1],
/// r1 < 0, r2 < 0, and DomainError at or past the pole r2 >= 1 - sqrt(j/n).
double eta_seq(const RandomDictSpec& spec, std::size_t j, double r1 = 0.0, double r2 = 0.0);

/// sqrt((m-j)(1 + eta_seq^2)).
double gamma_seq(const RandomDictSpec& spec, std::size_t j, double r1 = 0.0, double r2 = 0.0);

/// Continuous analog sqrt((p-x)(1 + ((a + sqrt(p-x)) / (b - sqrt(x)))^2)).
/// Requires a >= 0, p >= b^2 > 0 and 0 <= x < b^2 (DomainError otherwise).
double gamma_analog(double x, double p, double a, double b);

/// Upper estimate exp(j ln(m/j) + j) of C(m, j).
double binomial_estimate(std::size_t m, std::size_t j);

struct ProbBoundReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t ell = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  double gamma_value = 0.0;
  /// sum_{j<=ell} C(m, j), and its natural log (always finite).
  double binom_sum = 0.0;
  double log_binom_sum = 0.0;
  /// The same sum with each C(m, j) replaced by binomial_estimate.
  double binom_estimate_sum = 0.0;
  /// binom_sum * (exp(-n r1^2/2) + exp(-n r2^2/2)); may be +inf when only the
  /// log is representable.
  double failure_prob_rhs = 0.0;
  double log_failure_prob_rhs = 0.0;
  bool log_space = false;
  /// rhs >= 1: the bound says nothing.
  bool vacuous = false;
  /// The exponential-regime condition with u = ell/n, v = m/ell.
  bool regime_ok = false;
  double regime_margin = 0.0;
};

/// Tail bound on the probability that gamma_bar_ell of a random dictionary
/// exceeds gamma_seq(ell, r1, r2). Needs 1 <= ell <= n-1, r1 > 0 and
/// 0 < r2 < 1 - sqrt(ell/n) (PreconditionError otherwise).
ProbBoundReport gamma_tail_bound(const RandomDictSpec& spec, std::size_t ell, double r1, double r2);

struct RegimeCheck {
  bool holds;
  /// min(r1^2, r2^2)/2 - u(1 + ln v).
  double margin;
};

/// u(1 + ln v) < min(r1^2, r2^2)/2. Needs 0 < u < 1, v > 0, r1 > 0 and
/// 0 < r2 < 1 - sqrt(u).
RegimeCheck regime_check(double u, double v, double r1, double r2);

/// u(1 + ln(beta/u)) - c^2 (1 - sqrt u)^2 / 2.
double sparsity_equation(double u, double beta, double c);

/// The root in (0, 1) of sparsity_equation, by bisection. beta >= 1, 0 < c <= 1.
double sparsity_supremum(double beta, double c);

struct SparsityRow {
  double beta;
  double c;
  double u_star;
  double residual;
};

/// Rows in (c, beta) order for an evenly spaced beta grid with `steps` points.
std::vector<SparsityRow> sparsity_curve(double beta_min, double beta_max, std::size_t steps,
                                        const std::vector<double>& c_values);

/// CSV: beta,c,u_star,residual,note
void write_sparsity_csv(std::ostream& out, const std::vector<SparsityRow>& rows);

/// n x m matrix with iid N(0, 1/n) entries drawn row-major from Rng(seed).
/// With `normalize` the columns are rescaled to unit norm afterwards, which
/// breaks the independence the probabilistic results rely on.
Matrix gaussian_dictionary(std::size_t n, std::size_t m, std::uint64_t seed,
                           bool normalize = false);

struct SzarekTrial {
  std::size_t trial;
  std::uint64_t seed;
  double sigma_max;
  double sigma_min;
  bool exceeds_max;
  bool exceeds_min;
};

struct SzarekReport {
  std::size_t n = 0;
  std::size_t p = 0;
  double r = 0.0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  bool wide = false;
  double threshold_max = 0.0;
  double threshold_min = 0.0;
  double freq_max = 0.0;
  double freq_min = 0.0;
  /// exp(-n r^2 / 2).
  double tail_bound = 0.0;
  /// 3 sqrt(b (1 - b) / trials) with b = tail_bound.
  double allowance = 0.0;
  std::vector<SzarekTrial> rows;

  bool within_bound() const noexcept {
    return freq_max <= tail_bound + allowance && freq_min <= tail_bound + allowance;
  }
};

/// Empirical edge-exceedance frequencies of n x p matrices with N(0, 1/n)
/// entries. For p <= n the thresholds are 1 +- sqrt(p/n) +- r; for p > n they
/// are sqrt(p/n) +- 1 +- r. Trial t uses seed derive_seed(seed, t).
SzarekReport szarek_empirical_check(std::size_t n, std::size_t p, double r, std::size_t trials,
                                    std::uint64_t seed, unsigned workers = 0);

/// CSV: trial,seed,statistic,value,threshold,exceeded (two rows per trial).
void write_szarek_csv(std::ostream& out, const SzarekReport& report);

/// Estimate of eta_j from `samples` random j-subsets; a lower bound on the
/// exhaustive value.
double sampled_eta(const Matrix& a, std::size_t j, std::size_t samples, std::uint64_t seed);

}  // namespace sparsecert
