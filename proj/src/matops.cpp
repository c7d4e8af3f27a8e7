#include "sparsecert/matops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>

#include "sparsecert/error.hpp"

namespace sparsecert {

double default_subset_budget() {
  if (const char* env = std::getenv("SPARSECERT_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0 && std::isfinite(v)) return v;
  }
  return kDefaultSubsetBudget;
}

// ---------------------------------------------------------------------------
// ColumnSubset

ColumnSubset::ColumnSubset(std::vector<std::size_t> indices, std::size_t parent_cols)
    : indices_(std::move(indices)), parent_cols_(parent_cols) {
  if (indices_.empty()) throw InvalidInputError("column subset must be non-empty");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= parent_cols_) {
      throw InvalidInputError("column index " + std::to_string(indices_[i]) +
                              " out of range for " + std::to_string(parent_cols_) +
                              " columns");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw InvalidInputError("column subset indices must be strictly increasing");
    }
  }
}

ColumnSubset ColumnSubset::all(std::size_t parent_cols) {
  std::vector<std::size_t> idx(parent_cols);
  for (std::size_t i = 0; i < parent_cols; ++i) idx[i] = i;
  return ColumnSubset(std::move(idx), parent_cols);
}

std::vector<std::size_t> ColumnSubset::complement() const {
  std::vector<std::size_t> out;
  out.reserve(parent_cols_ - indices_.size());
  std::size_t k = 0;
  for (std::size_t c = 0; c < parent_cols_; ++c) {
    if (k < indices_.size() && indices_[k] == c) {
      ++k;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi

SingularSpectrum singular_spectrum(const Matrix& m) {
  if (m.empty()) throw InvalidInputError("singular_spectrum: empty matrix");
  // Work on the tall orientation: p columns of length n, n >= p.
  const bool wide = m.cols() > m.rows();
  const std::size_t n = wide ? m.cols() : m.rows();
  const std::size_t p = wide ? m.rows() : m.cols();
  std::vector<double> w(n * p);  // column-major
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::size_t col = wide ? r : c;
      const std::size_t row = wide ? c : r;
      w[col * n + row] = m(r, c);
    }

  constexpr double eps = 1e-15;
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      double* ci = &w[i * n];
      for (std::size_t j = i + 1; j < p; ++j) {
        double* cj = &w[j * n];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          alpha += ci[k] * ci[k];
          beta += cj[k] * cj[k];
          gamma += ci[k] * cj[k];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double a = ci[k];
          const double b = cj[k];
          ci[k] = c * a - s * b;
          cj[k] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }

  SingularSpectrum out;
  out.values.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += w[i * n + k] * w[i * n + k];
    out.values[i] = std::sqrt(s);
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial oracle

namespace {

using Poly = std::vector<double>;  // ascending coefficients, monic

// Faddeev-LeVerrier: coefficients of det(lambda I - G).
Poly characteristic_polynomial(const std::vector<double>& g, std::size_t k) {
  Poly c(k + 1, 0.0);
  c[k] = 1.0;
  std::vector<double> mk(k * k, 0.0), next(k * k);
  for (std::size_t i = 1; i <= k; ++i) {
    // next = G * mk + c[k-i+1] I
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t col = 0; col < k; ++col) {
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += g[r * k + t] * mk[t * k + col];
        next[r * k + col] = s + (r == col ? c[k - i + 1] : 0.0);
      }
    mk = next;
    double tr = 0.0;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t t = 0; t < k; ++t) tr += g[r * k + t] * mk[t * k + r];
    c[k - i] = -tr / static_cast<double>(i);
  }
  return c;
}

double poly_eval(const Poly& c, double x, double* deriv) {
  double v = 0.0, d = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) {
    d = d * x + v;
    v = v * x + c[i];
  }
  if (deriv) *deriv = d;
  return v;
}

std::vector<double> quadratic_roots(double b, double c) {
  // x^2 + b x + c, roots assumed real (discriminant clamped at 0).
  const double disc = std::max(0.0, b * b - 4.0 * c);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, 0.0};
  return {q, c / q};
}

// Real roots of the monic cubic x^3 + a x^2 + b x + c.
std::vector<double> cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  const double scale = std::max({1.0, std::abs(p), std::abs(q)});
  if (disc > 1e-14 * scale * scale * scale) {
    const double s = std::sqrt(disc);
    return {std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) + shift};
  }
  if (p >= 0.0) {
    const double t = std::cbrt(-q);
    return {t + shift, t + shift, t + shift};
  }
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::vector<double> out(3);
  for (int k = 0; k < 3; ++k)
    out[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift;
  return out;
}

// Roots of the monic quartic x^4 + a x^3 + b x^2 + c x + d, all assumed real.
std::vector<double> quartic_roots(double a, double b, double c, double d) {
  const double shift = -a / 4.0;
  const double p = b - 3.0 * a * a / 8.0;
  const double q = a * a * a / 8.0 - a * b / 2.0 + c;
  const double r = -3.0 * a * a * a * a / 256.0 + a * a * b / 16.0 - a * c / 4.0 + d;
  std::vector<double> ys;
  // Resolvent 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0.
  double mres = 0.0;
  for (double root : cubic_roots(p, (2.0 * p * p - 8.0 * r) / 8.0, -q * q / 8.0))
    mres = std::max(mres, root);
  const double scale = std::max({1.0, std::abs(p), std::sqrt(std::abs(r))});
  if (mres <= 1e-14 * scale) {
    // Biquadratic: y^4 + p y^2 + r = 0.
    for (double z : quadratic_roots(p, r)) {
      const double y = std::sqrt(std::max(0.0, z));
      ys.push_back(y);
      ys.push_back(-y);
    }
  } else {
    const double s = std::sqrt(2.0 * mres);
    const double t = q / (2.0 * s);
    for (double y : quadratic_roots(-s, p / 2.0 + mres + t)) ys.push_back(y);
    for (double y : quadratic_roots(s, p / 2.0 + mres - t)) ys.push_back(y);
  }
  for (double& y : ys) y += shift;
  return ys;
}

void polish(const Poly& c, std::vector<double>& roots) {
  for (double& x : roots) {
    for (int it = 0; it < 4; ++it) {
      double d = 0.0;
      const double v = poly_eval(c, x, &d);
      if (d == 0.0 || v == 0.0) break;
      const double nx = x - v / d;
      if (!(std::abs(poly_eval(c, nx, nullptr)) < std::abs(v))) break;
      x = nx;
    }
  }
}

}  // namespace

SingularSpectrum oracle_spectrum(const Matrix& m) {
  if (m.empty()) throw InvalidInputError("oracle_spectrum: empty matrix");
  const std::size_t k = std::min(m.rows(), m.cols());
  if (k > 4) {
    throw UnsupportedSizeError("oracle_spectrum supports a short side of at most 4, got " +
                               std::to_string(k));
  }
  // Gram matrix of the short side.
  const bool use_rows = m.rows() <= m.cols();
  const std::size_t len = use_rows ? m.cols() : m.rows();
  std::vector<double> g(k * k, 0.0);
  auto at = [&](std::size_t vec, std::size_t pos) {
    return use_rows ? m(vec, pos) : m(pos, vec);
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < len; ++t) s += at(i, t) * at(j, t);
      g[i * k + j] = s;
    }

  const Poly c = characteristic_polynomial(g, k);
  std::vector<double> lambdas;
  switch (k) {
    case 1: lambdas = {-c[0]}; break;
    case 2: lambdas = quadratic_roots(c[1], c[0]); break;
    case 3: lambdas = cubic_roots(c[2], c[1], c[0]); break;
    default: lambdas = quartic_roots(c[3], c[2], c[1], c[0]); break;
  }
  polish(c, lambdas);

  SingularSpectrum out;
  out.values.reserve(k);
  for (double l : lambdas) out.values.push_back(std::sqrt(std::max(0.0, l)));
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

double spectral_norm(const Matrix& m, int max_iter, double rel_tol) {
  if (m.empty()) throw InvalidInputError("spectral_norm: empty matrix");
  // Iterate on M^T M (cols-dimensional) or M M^T, whichever is smaller.
  const bool via_rows = m.rows() < m.cols();
  const std::size_t dim = via_rows ? m.rows() : m.cols();
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (double& x : v) x /= nv;
    Vector w = via_rows ? m.apply(m.apply_transpose(v)) : m.apply_transpose(m.apply(v));
    const double next = norm2(w);
    v = std::move(w);
    if (std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

double pseudoinverse_frobenius(const Matrix& m) {
  const SingularSpectrum s = singular_spectrum(m);
  const double smax = s.max();
  const double smin = s.min();
  if (smax == 0.0 || smin <= kRankTolerance * smax) {
    throw SingularityError("pseudoinverse_frobenius: matrix is rank deficient (sigma_min = " +
                               format_exact(smin) + ")",
                           smin);
  }
  double acc = 0.0;
  for (double v : s.values) acc += 1.0 / (v * v);
  return std::sqrt(acc);
}

Matrix take_columns(const Matrix& m, const std::vector<std::size_t>& columns) {
  Matrix out(m.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= m.cols()) {
      throw InvalidInputError("take_columns: index " + std::to_string(columns[j]) +
                              " out of range");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, j) = m(r, columns[j]);
  }
  return out;
}

Matrix take_columns(const Matrix& m, const ColumnSubset& subset) {
  if (subset.parent_cols() != m.cols()) {
    throw InvalidInputError("take_columns: subset built for " +
                            std::to_string(subset.parent_cols()) + " columns, matrix has " +
                            std::to_string(m.cols()));
  }
  return take_columns(m, subset.indices());
}

// ---------------------------------------------------------------------------
// Binomials and enumeration

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -INFINITY;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  // Exact product while it stays below 2^53; each partial value is itself a
  // binomial coefficient, so the division is exact.
  constexpr double kExactLimit = 9007199254740992.0;
  double v = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double next = v * static_cast<double>(n - k + i);
    if (next >= kExactLimit) return std::exp(log_binomial(n, k));
    v = next / static_cast<double>(i);
  }
  return v;
}

SubsetEnumerator::SubsetEnumerator(std::size_t cols, std::size_t j, double budget)
    : cols_(cols), count_(binomial(cols, j)) {
  if (j < 1 || j > cols) {
    throw InvalidInputError("enumerate_subsets: need 1 <= j <= cols, got j = " +
                            std::to_string(j) + ", cols = " + std::to_string(cols));
  }
  if (count_ > budget) {
    throw BudgetExceededError("enumerating C(" + std::to_string(cols) + ", " +
                                  std::to_string(j) + ") = " + format_exact(count_) +
                                  " subsets exceeds the budget of " + format_exact(budget),
                              count_, budget);
  }
  idx_.resize(j);
  for (std::size_t i = 0; i < j; ++i) idx_[i] = i;
}

bool SubsetEnumerator::advance() {
  const std::size_t j = idx_.size();
  std::size_t i = j;
  while (i-- > 0) {
    if (idx_[i] < cols_ - j + i) {
      ++idx_[i];
      for (std::size_t t = i + 1; t < j; ++t) idx_[t] = idx_[t - 1] + 1;
      ++rank_;
      return true;
    }
  }
  return false;
}

std::vector<ColumnSubset> enumerate_subsets(std::size_t cols, std::size_t j, double budget) {
  SubsetEnumerator it(cols, j, budget);
  std::vector<ColumnSubset> out;
  out.reserve(static_cast<std::size_t>(it.count()));
  do {
    out.push_back(it.subset());
  } while (it.advance());
  return out;
}

}  // namespace sparsecert
