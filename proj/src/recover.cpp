#include "sparsecert/recover.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "sparsecert/error.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert {

ProblemInstance make_instance(std::size_t n, std::size_t m, std::size_t p, double epsilon,
                              std::uint64_t seed, bool normalize_columns) {
  if (n < 1 || m <= n) throw InvalidInputError("make_instance needs m > n >= 1");
  if (p > m) {
    throw InvalidInputError("sparsity p = " + std::to_string(p) + " exceeds m = " +
                            std::to_string(m));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInputError("epsilon must be finite and non-negative");
  }
  Rng rng(seed);
  ProblemInstance inst;
  inst.p = p;
  inst.seed = seed;
  inst.noise_norm = epsilon;

  Matrix a(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) a(r, c) = rng.normal();
  if (normalize_columns) {
    for (std::size_t c = 0; c < m; ++c) {
      const double norm = a.column_norm(c);
      for (std::size_t r = 0; r < n; ++r) a(r, c) /= norm;
    }
  }

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < p; ++i) std::swap(perm[i], perm[i + rng.index(m - i)]);
  inst.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(p));
  std::sort(inst.support.begin(), inst.support.end());

  inst.s0.assign(m, 0.0);
  for (std::size_t idx : inst.support) {
    double v = 0.0;
    while (v == 0.0) v = rng.normal();
    inst.s0[idx] = v;
  }
  inst.x = a.apply(inst.s0);
  if (epsilon > 0.0) {
    Vector dir(n);
    double norm = 0.0;
    while (norm == 0.0) {
      for (double& d : dir) d = rng.normal();
      norm = norm2(dir);
    }
    for (std::size_t i = 0; i < n; ++i) inst.x[i] += epsilon * dir[i] / norm;
  }
  inst.dictionary = std::move(a);
  return inst;
}

namespace {

void write_lines(const std::string& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  for (double d : v) out << format_exact(d) << '\n';
}

}  // namespace

void write_instance(const std::string& prefix, const ProblemInstance& inst) {
  write_matrix_file(prefix + ".matrix", inst.dictionary);
  write_lines(prefix + ".x", inst.x);
  write_lines(prefix + ".s0", inst.s0);
  nlohmann::ordered_json j;
  j["n"] = inst.dictionary.rows();
  j["m"] = inst.dictionary.cols();
  j["seed"] = inst.seed;
  j["p"] = inst.p;
  j["epsilon"] = inst.noise_norm;
  j["support"] = inst.support;
  std::vector<double> values;
  for (std::size_t idx : inst.support) values.push_back(inst.s0[idx]);
  j["values"] = values;
  j["rng"] = kRngAlgorithm;
  std::ofstream out(prefix + ".json");
  if (!out) throw ParseError("cannot open " + prefix + ".json for writing");
  out << j.dump(2) << '\n';
}

ProblemInstance read_instance(const std::string& prefix) {
  ProblemInstance inst;
  inst.dictionary = read_matrix_file(prefix + ".matrix");
  inst.x = read_vector_file(prefix + ".x");
  inst.s0 = read_vector_file(prefix + ".s0");
  std::ifstream in(prefix + ".json");
  if (!in) throw ParseError("cannot open " + prefix + ".json");
  nlohmann::json j;
  try {
    in >> j;
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.p = j.at("p").get<std::size_t>();
    inst.noise_norm = j.at("epsilon").get<double>();
    inst.support = j.at("support").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(prefix + ".json: " + e.what());
  }
  if (inst.x.size() != inst.dictionary.rows() || inst.s0.size() != inst.dictionary.cols()) {
    throw ParseError(prefix + ": vector lengths do not match the matrix");
  }
  return inst;
}

MinNormProjector::MinNormProjector(const Matrix& a)
    : a_(a), qr_(a.transpose()), tau_(a.rows(), 0.0), rdiag_(a.rows(), 0.0) {
  const std::size_t m = qr_.rows();
  const std::size_t n = qr_.cols();
  if (n == 0 || n > m) throw InvalidInputError("MinNormProjector needs a wide or square A");
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, qr_(i, k));
    if (norm == 0.0) {
      rdiag_[k] = 0.0;
      continue;
    }
    const double alpha = qr_(k, k) > 0.0 ? -norm : norm;
    // v = x - alpha e_k stored in place; H = I - tau v v^T.
    qr_(k, k) -= alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < m; ++i) vtv += qr_(i, k) * qr_(i, k);
    tau_[k] = 2.0 / vtv;
    for (std::size_t c = k + 1; c < n; ++c) {
      double w = 0.0;
      for (std::size_t i = k; i < m; ++i) w += qr_(i, k) * qr_(i, c);
      w *= tau_[k];
      for (std::size_t i = k; i < m; ++i) qr_(i, c) -= w * qr_(i, k);
    }
    rdiag_[k] = alpha;
  }
  double biggest = 0.0;
  double smallest = INFINITY;
  for (double d : rdiag_) {
    biggest = std::max(biggest, std::abs(d));
    smallest = std::min(smallest, std::abs(d));
  }
  if (biggest == 0.0 || smallest <= 1e-12 * biggest) {
    throw SingularityError("A is numerically rank deficient (|R_kk| ratio " +
                               format_exact(biggest == 0.0 ? 0.0 : smallest / biggest) + ")",
                           smallest);
  }
}

Vector MinNormProjector::solve(std::span<const double> x) const {
  const std::size_t m = qr_.rows();
  const std::size_t n = qr_.cols();
  if (x.size() != n) throw InvalidInputError("right-hand side length does not match A");
  // R^T y = x, R strictly upper part lives above the diagonal of qr_.
  Vector z(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t k = 0; k < i; ++k) acc -= qr_(k, i) * z[k];
    z[i] = acc / rdiag_[i];
  }
  for (std::size_t k = n; k-- > 0;) {
    if (tau_[k] == 0.0) continue;
    double w = 0.0;
    for (std::size_t i = k; i < m; ++i) w += qr_(i, k) * z[i];
    w *= tau_[k];
    for (std::size_t i = k; i < m; ++i) z[i] -= w * qr_(i, k);
  }
  return z;
}

Vector MinNormProjector::project(std::span<const double> s, std::span<const double> x) const {
  if (s.size() != a_.cols()) throw InvalidInputError("vector length does not match A");
  const Vector r = subtract(a_.apply(s), x);
  const Vector c = solve(r);
  return subtract(s, c);
}

Vector min_l2_solve(const Matrix& a, std::span<const double> x) {
  return MinNormProjector(a).solve(x);
}

Vector sl0_solve(const Matrix& a, std::span<const double> x, const Sl0Options& opts) {
  if (!(opts.sigma_min > 0.0)) throw InvalidInputError("sigma_min must be positive");
  if (!(opts.sigma_decrease > 0.0 && opts.sigma_decrease < 1.0)) {
    throw InvalidInputError("sigma_decrease must lie in (0, 1)");
  }
  if (opts.inner_iters < 1) throw InvalidInputError("inner_iters must be at least 1");
  const MinNormProjector proj(a);
  Vector s = proj.solve(x);
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  // The last level runs at exactly sigma_min.
  for (double sigma = 2.0 * peak; sigma > 0.0;) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int it = 0; it < opts.inner_iters; ++it) {
      for (double& v : s) v -= opts.mu * v * std::exp(-v * v * inv);
      s = proj.project(s, x);
    }
    if (sigma <= opts.sigma_min) break;
    sigma = std::max(sigma * opts.sigma_decrease, opts.sigma_min);
  }
  s = proj.project(s, x);
  return proj.project(s, x);
}

SparseSolver sl0_solver(Sl0Options opts) {
  return [opts](const Matrix& a, std::span<const double> x) { return sl0_solve(a, x, opts); };
}

}  // namespace sparsecert
