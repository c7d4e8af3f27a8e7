#include "sparsecert/random_dict.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "sparsecert/error.hpp"
#include "sparsecert/matops.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert {

namespace {

constexpr double kLogSpaceThreshold = 1e15;

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_r(std::size_t n, std::size_t j, double r1, double r2) {
  if (j < 1 || j + 1 > n) {
    throw PreconditionError("j must lie in [1, n-1]; got j = " + std::to_string(j) +
                            " with n = " + std::to_string(n));
  }
  if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw PreconditionError("r1 and r2 must be non-negative");
  const double pole = 1.0 - std::sqrt(static_cast<double>(j) / static_cast<double>(n));
  if (!(r2 < pole)) {
    throw DomainError("r2 = " + format_exact(r2) + " reaches the pole 1 - sqrt(j/n) = " +
                      format_exact(pole));
  }
}

}  // namespace

RandomDictSpec::RandomDictSpec(std::size_t n_, std::size_t m_) : n(n_), m(m_) {
  if (n < 1 || m <= n) {
    throw InvalidInputError("random dictionary needs m > n >= 1, got n = " + std::to_string(n) +
                            ", m = " + std::to_string(m));
  }
}

double eta_seq(const RandomDictSpec& spec, std::size_t j, double r1, double r2) {
  check_r(spec.n, j, r1, r2);
  const double n = static_cast<double>(spec.n);
  const double num = 1.0 + std::sqrt(static_cast<double>(spec.m - j) / n) + r1;
  const double den = 1.0 - std::sqrt(static_cast<double>(j) / n) - r2;
  return num / den;
}

double gamma_seq(const RandomDictSpec& spec, std::size_t j, double r1, double r2) {
  const double eta = eta_seq(spec, j, r1, r2);
  return std::sqrt(static_cast<double>(spec.m - j) * (1.0 + eta * eta));
}

double gamma_analog(double x, double p, double a, double b) {
  if (!(a >= 0.0) || !(b > 0.0) || !(p >= b * b)) {
    throw DomainError("gamma_analog needs a >= 0 and p >= b^2 > 0");
  }
  if (!(x >= 0.0) || !(x < b * b)) {
    throw DomainError("gamma_analog needs 0 <= x < b^2 = " + format_exact(b * b) + "; got x = " +
                      format_exact(x));
  }
  const double ratio = (a + std::sqrt(p - x)) / (b - std::sqrt(x));
  return std::sqrt((p - x) * (1.0 + ratio * ratio));
}

double binomial_estimate(std::size_t m, std::size_t j) {
  const double jd = static_cast<double>(j);
  return std::exp(jd * std::log(static_cast<double>(m) / jd) + jd);
}

RegimeCheck regime_check(double u, double v, double r1, double r2) {
  if (!(u > 0.0 && u < 1.0) || !(v > 0.0) || !(r1 > 0.0) || !(r2 > 0.0) ||
      !(r2 < 1.0 - std::sqrt(u))) {
    throw PreconditionError("regime_check needs 0 < u < 1, v > 0, r1 > 0, 0 < r2 < 1 - sqrt(u)");
  }
  const double rhs = std::min(r1 * r1, r2 * r2) / 2.0;
  const double lhs = u * (1.0 + std::log(v));
  return {lhs < rhs, rhs - lhs};
}

ProbBoundReport gamma_tail_bound(const RandomDictSpec& spec, std::size_t ell, double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw PreconditionError("gamma_tail_bound needs r1 > 0 and r2 > 0");
  try {
    check_r(spec.n, ell, r1, r2);
  } catch (const DomainError& e) {
    throw PreconditionError(e.what());
  }
  ProbBoundReport rep;
  rep.n = spec.n;
  rep.m = spec.m;
  rep.ell = ell;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.gamma_value = gamma_seq(spec, ell, r1, r2);

  double log_sum = -INFINITY;
  double direct = 0.0;
  for (std::size_t j = 1; j <= ell; ++j) {
    const double c = binomial(spec.m, j);
    if (c > kLogSpaceThreshold) rep.log_space = true;
    direct += c;
    log_sum = log_add(log_sum, log_binomial(spec.m, j));
    rep.binom_estimate_sum += binomial_estimate(spec.m, j);
  }
  rep.log_binom_sum = rep.log_space ? log_sum : std::log(direct);
  rep.binom_sum = rep.log_space ? std::exp(log_sum) : direct;

  const double n = static_cast<double>(spec.n);
  const double log_tail = log_add(-n * r1 * r1 / 2.0, -n * r2 * r2 / 2.0);
  rep.log_failure_prob_rhs = rep.log_binom_sum + log_tail;
  rep.failure_prob_rhs = rep.log_space ? std::exp(rep.log_failure_prob_rhs)
                                       : direct * (std::exp(-n * r1 * r1 / 2.0) +
                                                   std::exp(-n * r2 * r2 / 2.0));
  rep.vacuous = rep.log_failure_prob_rhs >= 0.0;

  const RegimeCheck regime = regime_check(static_cast<double>(ell) / n,
                                            static_cast<double>(spec.m) / static_cast<double>(ell),
                                            r1, r2);
  rep.regime_ok = regime.holds;
  rep.regime_margin = regime.margin;
  return rep;
}

double sparsity_equation(double u, double beta, double c) {
  const double s = 1.0 - std::sqrt(u);
  return u * (1.0 + std::log(beta / u)) - c * c * s * s / 2.0;
}

double sparsity_supremum(double beta, double c) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw DomainError("beta must be >= 1");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
  double lo = 1e-12;
  double hi = (1.0 - 1e-12) * (1.0 - 1e-12);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sparsity_equation(mid, beta, c) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(sparsity_equation(lo, beta, c)) <= std::abs(sparsity_equation(hi, beta, c))
             ? lo
             : hi;
}

std::vector<SparsityRow> sparsity_curve(double beta_min, double beta_max, std::size_t steps,
                                        const std::vector<double>& c_values) {
  if (!(beta_min >= 1.0) || !(beta_max >= beta_min)) {
    throw DomainError("need 1 <= beta_min <= beta_max");
  }
  if (steps < 1) throw InvalidInputError("steps must be at least 1");
  if (c_values.empty()) throw InvalidInputError("at least one c value is required");
  std::vector<SparsityRow> rows;
  rows.reserve(steps * c_values.size());
  for (double c : c_values) {
    for (std::size_t i = 0; i < steps; ++i) {
      const double beta =
          steps == 1 ? beta_min
                     : beta_min + (beta_max - beta_min) * static_cast<double>(i) /
                                      static_cast<double>(steps - 1);
      const double u = sparsity_supremum(beta, c);
      rows.push_back({beta, c, u, sparsity_equation(u, beta, c)});
    }
  }
  return rows;
}

void write_sparsity_csv(std::ostream& out, const std::vector<SparsityRow>& rows) {
  out << "beta,c,u_star,residual,note\n";
  for (const auto& r : rows) {
    out << format_exact(r.beta) << ',' << format_exact(r.c) << ',' << format_exact(r.u_star)
        << ',' << format_exact(r.residual) << ','
        << (r.c == 1.0 ? "c=1 sends gamma to infinity; supremum envelope only" : "") << '\n';
  }
}

Matrix gaussian_dictionary(std::size_t n, std::size_t m, std::uint64_t seed, bool normalize) {
  if (n < 1 || m <= n) throw InvalidInputError("gaussian_dictionary needs m > n >= 1");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix a(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) a(r, c) = scale * rng.normal();
  if (normalize) {
    for (std::size_t c = 0; c < m; ++c) {
      const double norm = a.column_norm(c);
      if (norm > 0.0)
        for (std::size_t r = 0; r < n; ++r) a(r, c) /= norm;
    }
  }
  return a;
}

SzarekReport szarek_empirical_check(std::size_t n, std::size_t p, double r, std::size_t trials,
                                    std::uint64_t seed, unsigned workers) {
  if (n < 1 || p < 1) throw InvalidInputError("szarek_empirical_check needs n, p >= 1");
  if (trials < 1) throw InvalidInputError("trials must be at least 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInputError("r must be positive");
  SzarekReport rep;
  rep.n = n;
  rep.p = p;
  rep.r = r;
  rep.trials = trials;
  rep.master_seed = seed;
  rep.wide = p > n;
  const double ratio = std::sqrt(static_cast<double>(p) / static_cast<double>(n));
  if (rep.wide) {
    rep.threshold_max = ratio + 1.0 + r;
    rep.threshold_min = ratio - 1.0 - r;
  } else {
    rep.threshold_max = 1.0 + ratio + r;
    rep.threshold_min = 1.0 - ratio - r;
  }
  rep.tail_bound = std::exp(-static_cast<double>(n) * r * r / 2.0);
  rep.allowance =
      3.0 * std::sqrt(rep.tail_bound * (1.0 - rep.tail_bound) / static_cast<double>(trials));
  rep.rows.resize(trials);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  detail::parallel_for(trials, workers, [&](std::size_t t) {
    const std::uint64_t s = derive_seed(seed, t);
    Rng rng(s);
    Matrix x(n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < p; ++k) x(i, k) = scale * rng.normal();
    const SingularSpectrum sv = singular_spectrum(x);
    // The spectrum holds min(n, p) values, so for p > n this is the n-th.
    const double smax = sv.max();
    const double smin = sv.min();
    rep.rows[t] = {t, s, smax, smin, smax > rep.threshold_max, smin < rep.threshold_min};
  });
  std::size_t hi = 0;
  std::size_t lo = 0;
  for (const auto& row : rep.rows) {
    hi += row.exceeds_max;
    lo += row.exceeds_min;
  }
  rep.freq_max = static_cast<double>(hi) / static_cast<double>(trials);
  rep.freq_min = static_cast<double>(lo) / static_cast<double>(trials);
  return rep;
}

void write_szarek_csv(std::ostream& out, const SzarekReport& rep) {
  out << "trial,seed,statistic,value,threshold,exceeded\n";
  for (const auto& row : rep.rows) {
    out << row.trial << ',' << row.seed << ",sigma_max," << format_exact(row.sigma_max) << ','
        << format_exact(rep.threshold_max) << ',' << (row.exceeds_max ? 1 : 0) << '\n';
    out << row.trial << ',' << row.seed << ",sigma_min," << format_exact(row.sigma_min) << ','
        << format_exact(rep.threshold_min) << ',' << (row.exceeds_min ? 1 : 0) << '\n';
  }
}

double sampled_eta(const Matrix& a, std::size_t j, std::size_t samples, std::uint64_t seed) {
  if (j < 1 || j >= a.cols()) throw InvalidInputError("sampled_eta needs 1 <= j < m");
  Rng rng(seed);
  std::vector<std::size_t> perm(a.cols());
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < j; ++i) std::swap(perm[i], perm[i + rng.index(a.cols() - i)]);
    std::vector<std::size_t> idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(j));
    std::sort(idx.begin(), idx.end());
    const ColumnSubset b(idx, a.cols());
    const double smin = singular_spectrum(take_columns(a, b)).min();
    const double bc = singular_spectrum(take_columns(a, b.complement())).max();
    best = std::max(best, smin == 0.0 ? INFINITY : bc / smin);
  }
  return best;
}

}  // namespace sparsecert
