// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sparsecert/certify.hpp"
#include "sparsecert/dict_analysis.hpp"
#include "sparsecert/error.hpp"
#include "sparsecert/experiment.hpp"
#include "sparsecert/matops.hpp"
#include "sparsecert/random_dict.hpp"
#include "sparsecert/recover.hpp"
#include "sparsecert/rng.hpp"

using namespace sparsecert;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix unit_columns(Matrix a) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const double nrm = a.column_norm(c);
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, c) /= nrm;
  }
  return a;
}

// ---------------------------------------------------------------------------

Outcome c1_reference_sequences() {
  Outcome o;
  const Dictionary d(read_matrix_file(SPARSECERT_TEST_DATA "/sample_3x4.matrix"));
  const SpectralProfile p = gamma_profile(d);
  const double eta[] = {1.49, 6.91, 5.04};
  const double gamma[] = {3.11, 9.87, 5.14};
  o.require(p.depth() == 3, "profile depth is not 3");
  for (std::size_t j = 1; j <= p.depth(); ++j) {
    o.require(std::abs(p.eta(j) - eta[j - 1]) <= 0.05, "eta_" + std::to_string(j) + " off");
    o.require(std::abs(p.gamma(j) - gamma[j - 1]) <= 0.1, "gamma_" + std::to_string(j) + " off");
  }
  o.detail = o.pass ? "eta = {" + fmt("%.4f", p.eta(1)) + ", " + fmt("%.4f", p.eta(2)) + ", " +
                          fmt("%.4f", p.eta(3)) + "}, gamma = {" + fmt("%.4f", p.gamma(1)) +
                          ", " + fmt("%.4f", p.gamma(2)) + ", " + fmt("%.4f", p.gamma(3)) + "}"
                    : o.detail;
  return o;
}

Outcome c2_tight_example() {
  Outcome o;
  const TightExample ex = tight_example(5.0, 0.2);
  o.require(std::abs(ex.beta - 2.2926) <= 5e-5, "beta = " + fmt("%.6f", ex.beta));
  const double expected_a[2][3] = {{1.0, 0.9962, 0.0436}, {0.0, 0.0872, -0.9990}};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      o.require(std::abs(ex.a(r, c) - expected_a[r][c]) <= 5e-5, "A entry mismatch");
  double worst = 0.0;
  for (double th : {1.0, 5.0, 20.0, 38.0}) {
    const TightExample e = tight_example(th, 0.2);
    const double target = e.profile.gamma_bar(2) * 0.2;
    const double rel = std::abs(e.actual_error - target) / target;
    worst = std::max(worst, rel);
    o.require(e.all_passed() && rel < 1e-9, "equality fails at theta = " + fmt("%g", th));
  }
  if (o.pass) o.detail = "beta = " + fmt("%.6f", ex.beta) + ", worst relative gap " + fmt("%.2e", worst);
  return o;
}

Outcome c3_theta0() {
  Outcome o;
  const double t0 = tight_example_theta0_degrees();
  o.require(std::abs(t0 - 38.6683) <= 1e-4, "theta0 = " + fmt("%.6f", t0));
  if (o.pass) o.detail = "theta0 = " + fmt("%.6f", t0) + " deg";
  return o;
}

Outcome c4_experiment() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.master_seed = 1;
  const ExperimentReport rep = run_experiment(cfg);
  std::size_t g_below_tight = 0;
  for (const auto& t : rep.trials) {
    o.require(t.ok(), "trial " + std::to_string(t.trial) + " failed: " + t.status);
    o.require(t.loose_bound >= t.tight_bound && t.tight_bound >= t.actual_error &&
                  t.actual_error >= 0.0,
              "ordering violated in trial " + std::to_string(t.trial));
    g_below_tight += t.first_bound < t.tight_bound;
  }
  o.require(rep.mean_loose_ratio > rep.mean_tight_ratio, "mean first/actual <= mean tight/actual");
  o.require(rep.mean_loose_ratio >= 10.0 && rep.mean_loose_ratio <= 200.0,
            "mean first/actual outside [10, 200]");
  o.require(rep.mean_tight_ratio >= 3.0 && rep.mean_tight_ratio <= 60.0,
            "mean tight/actual outside [3, 60]");
  if (o.pass) {
    o.detail = "mean first(sigma_min)/actual = " + fmt("%.2f", rep.mean_loose_ratio) +
               ", mean tight/actual = " + fmt("%.2f", rep.mean_tight_ratio) +
               "; G_A bound/actual = " + fmt("%.3g", rep.mean_first_ratio) + " (below tight in " +
               std::to_string(g_below_tight) + " trials)";
  }
  return o;
}

// Soundness: randomized (A, s0, s_hat) with every applicable certificate.
struct SoundnessStats {
  std::size_t instances = 0;
  std::size_t certificates = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

void check_cert(SoundnessStats& st, const BoundCertificate& c, double actual, std::size_t i) {
  if (!c.ok()) return;
  ++st.certificates;
  if (actual > *c.bound * (1.0 + 1e-9) + 1e-9) {
    if (st.violations++ == 0) {
      st.first_violation = "instance " + std::to_string(i) + ": " +
                           std::string(to_string(c.theorem)) + " bound " + fmt("%.6g", *c.bound) +
                           " < error " + fmt("%.6g", actual);
    }
  }
}

void soundness_instance(SoundnessStats& st, std::size_t i) {
  Rng rng(derive_seed(0x5eed, i));
  const std::size_t n = 2 + rng.index(4);
  const std::size_t m = n + 1 + rng.index(4);
  const bool normalized = rng.index(2) == 0;
  Matrix a = unit_columns(random_matrix(n, m, rng));
  if (!normalized) {
    for (std::size_t c = 0; c < m; ++c) {
      const double scale = 0.3 + 2.7 * rng.uniform();
      for (std::size_t r = 0; r < n; ++r) a(r, c) *= scale;
    }
  }
  const Dictionary dict(a);
  const KruskalRank rank = kruskal_rank(a);
  if (rank.q == 0) return;
  const std::size_t ell = 1 + rng.index(rank.q);
  const std::size_t p = rng.index(ell / 2 + 1);

  Vector s0(m, 0.0);
  std::vector<std::size_t> perm(m);
  for (std::size_t k = 0; k < m; ++k) perm[k] = k;
  for (std::size_t k = 0; k < p; ++k) std::swap(perm[k], perm[k + rng.index(m - k)]);
  for (std::size_t k = 0; k < p; ++k) s0[perm[k]] = rng.normal();

  const bool noisy = rng.index(2) == 0;
  Vector x = a.apply(s0);
  double eps = 0.0;
  if (noisy) {
    eps = 0.5 * rng.uniform();
    Vector dir(n);
    for (double& d : dir) d = rng.normal();
    const double len = eps * rng.uniform() / norm2(dir);
    for (std::size_t r = 0; r < n; ++r) x[r] += len * dir[r];
  }

  const MinNormProjector proj(a);
  Vector s_hat;
  switch (rng.index(4)) {
    case 0: {  // solver output
      const double sig[] = {0.5, 0.1, 0.01};
      s_hat = sl0_solve(a, x, {.sigma_min = sig[rng.index(3)]});
      break;
    }
    case 1: {  // adversarial null-space displacement
      Vector z(m);
      for (double& v : z) v = rng.normal();
      const Vector nz = proj.project(z, Vector(n, 0.0));
      const double t = 3.0 * rng.uniform();
      s_hat = s0;
      for (std::size_t k = 0; k < m; ++k) s_hat[k] += t * nz[k];
      s_hat = proj.project(s_hat, x);
      break;
    }
    case 2: {  // exactly floor(ell/2)-sparse least-squares fit on a random support
      const std::size_t k = ell / 2;
      s_hat.assign(m, 0.0);
      if (k > 0) {
        std::vector<std::size_t> sp(m);
        for (std::size_t q = 0; q < m; ++q) sp[q] = q;
        for (std::size_t q = 0; q < k; ++q) std::swap(sp[q], sp[q + rng.index(m - q)]);
        sp.resize(k);
        std::sort(sp.begin(), sp.end());
        const Matrix b = take_columns(a, sp);
        // Normal equations are adequate at these sizes.
        const Matrix g = b.transpose() * b;
        Vector rhs = b.apply_transpose(x);
        Matrix aug = g;
        for (std::size_t c = 0; c < k; ++c) {
          for (std::size_t r = c + 1; r < k; ++r) {
            const double f = aug(r, c) / aug(c, c);
            for (std::size_t q = c; q < k; ++q) aug(r, q) -= f * aug(c, q);
            rhs[r] -= f * rhs[c];
          }
        }
        Vector y(k);
        for (std::size_t r = k; r-- > 0;) {
          double acc = rhs[r];
          for (std::size_t q = r + 1; q < k; ++q) acc -= aug(r, q) * y[q];
          y[r] = acc / aug(r, r);
        }
        for (std::size_t q = 0; q < k; ++q) s_hat[sp[q]] = y[q];
      }
      break;
    }
    default: {  // near-sparse: s0 plus small dense noise, made feasible
      s_hat = s0;
      const double scale = std::pow(10.0, -3.0 * rng.uniform());
      for (double& v : s_hat) v += scale * rng.normal();
      s_hat = proj.project(s_hat, x);
      break;
    }
  }
  // Optionally leave a residual of controlled size.
  if (rng.index(2) == 0) {
    Vector r(n);
    for (double& v : r) v = rng.normal();
    const double len = 0.2 * rng.uniform() / norm2(r);
    for (double& v : r) v *= len;
    const Vector shift = proj.solve(r);
    for (std::size_t k = 0; k < m; ++k) s_hat[k] += shift[k];
  }
  const double delta = norm2(subtract(a.apply(s_hat), x));
  const double actual = norm2(subtract(s_hat, s0));
  const NoiseBudget noise{eps, delta};
  ++st.instances;

  const SpectralProfile prof = gamma_profile(dict, rank, ell);
  const bool exact = eps == 0.0 && delta <= 1e-12 * std::max(1.0, norm2(x));
  if (exact) {
    check_cert(st, tight_bound(prof, s_hat, ell), actual, i);
    check_cert(st, loose_bound(prof, s_hat, ell), actual, i);
    if (normalized && rank.q == n) {
      const SpectralProfile full = ell == rank.q ? prof : gamma_profile(dict, rank, rank.q);
      check_cert(st, first_bound(dict, full, s_hat), actual, i);
    }
  }
  check_cert(st, noisy_tight_bound(dict, s_hat, ell, noise), actual, i);
  check_cert(st, noisy_loose_bound(prof, s_hat, ell, noise), actual, i);
  if (alpha_for(s_hat, ell) == 0.0) check_cert(st, stability_bound(prof, ell, noise), actual, i);
}

Outcome c5_soundness() {
  Outcome o;
  SoundnessStats st;
  for (std::size_t i = 0; i < 10000; ++i) soundness_instance(st, i);
  o.require(st.violations == 0, std::to_string(st.violations) + " violations; " + st.first_violation);
  o.require(st.instances == 10000, "only " + std::to_string(st.instances) + " instances ran");
  if (o.pass) {
    o.detail = std::to_string(st.instances) + " instances, " + std::to_string(st.certificates) +
               " certificates, 0 violations";
  }
  return o;
}

// Independent enumerator: walks bitmasks instead of lexicographic index
// vectors, ties broken by the lexicographically smallest index vector.
struct BitmaskLevel {
  double sigma_min = INFINITY;
  double eta = -1.0;
  std::vector<std::size_t> sigma_witness;
  std::vector<std::size_t> eta_witness;
};

BitmaskLevel bitmask_level(const Matrix& a, std::size_t j,
                           const std::function<SingularSpectrum(const Matrix&)>& spectrum) {
  BitmaskLevel out;
  const std::size_t m = a.cols();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != j) continue;
    std::vector<std::size_t> in;
    std::vector<std::size_t> out_cols;
    for (std::size_t c = 0; c < m; ++c) ((mask >> c) & 1u ? in : out_cols).push_back(c);
    const SingularSpectrum sb = spectrum(take_columns(a, in));
    const double smin = sb.min();
    const double ratio = spectrum(take_columns(a, out_cols)).max() / smin;
    if (smin < out.sigma_min || (smin == out.sigma_min && in < out.sigma_witness)) {
      out.sigma_min = smin;
      out.sigma_witness = in;
    }
    if (ratio > out.eta || (ratio == out.eta && in < out.eta_witness)) {
      out.eta = ratio;
      out.eta_witness = in;
    }
  }
  return out;
}

Outcome c6_oracles() {
  Outcome o;
  Rng rng(606);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t shortside = 1 + rng.index(4);
    const std::size_t longside = shortside + rng.index(8);
    const bool tall = rng.index(2) == 0;
    const Matrix m = tall ? random_matrix(longside, shortside, rng)
                          : random_matrix(shortside, longside, rng);
    const SingularSpectrum a = singular_spectrum(m);
    const SingularSpectrum b = oracle_spectrum(m);
    o.require(a.size() == b.size(), "spectrum sizes differ");
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  o.require(worst < 1e-10, "max spectrum deviation " + fmt("%.3e", worst));

  double oracle_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = unit_columns(random_matrix(4, 8, rng));
    const SpectralProfile p = gamma_profile(Dictionary(a), 0, ScanOptions{.workers = 3});
    for (std::size_t j = 1; j <= p.depth(); ++j) {
      const BitmaskLevel same = bitmask_level(a, j, singular_spectrum);
      const BitmaskLevel orc = bitmask_level(a, j, oracle_spectrum);
      const double gamma = std::sqrt(static_cast<double>(8 - j) * (1.0 + same.eta * same.eta));
      o.require(same.sigma_min == p.sigma_min(j) && same.eta == p.eta(j) && gamma == p.gamma(j),
                "second enumerator disagrees at j = " + std::to_string(j));
      o.require(same.sigma_witness == p.sigma_min_witness[j - 1].indices() &&
                    same.eta_witness == p.eta_witness[j - 1].indices(),
                "witnesses disagree at j = " + std::to_string(j));
      oracle_gap = std::max({oracle_gap, std::abs(orc.sigma_min - p.sigma_min(j)),
                             std::abs(orc.eta - p.eta(j)) / p.eta(j)});
    }
  }
  // The closed-form spectra go through the Gram matrix, which squares the
  // condition number of nearly dependent 4-column subsets.
  o.require(oracle_gap < 1e-7, "closed-form enumerator gap " + fmt("%.3e", oracle_gap));
  if (o.pass) {
    o.detail = "spectrum deviation " + fmt("%.2e", worst) +
               "; bitmask enumerator exact, closed-form enumerator within " + fmt("%.2e", oracle_gap);
  }
  return o;
}

Outcome c7_monotonicity() {
  Outcome o;
  Rng rng(707);
  std::size_t checks = 0;
  // sigma_min^(j) falls up to q and rises from n on.
  for (int t = 0; t < 50; ++t) {
    const Matrix a = unit_columns(random_matrix(4, 8, rng));
    std::vector<double> s;
    for (std::size_t j = 1; j <= 8; ++j) s.push_back(sigma_min_j(a, j).value);
    for (std::size_t j = 1; j < 4; ++j) {
      o.require(s[j] <= s[j - 1] + 1e-12, "sigma_min^(j) increased below n");
      ++checks;
    }
    for (std::size_t j = 4; j < 8; ++j) {
      o.require(s[j] >= s[j - 1] - 1e-12, "sigma_min^(j) decreased above n");
      ++checks;
    }
  }
  // Appending a column.
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.index(5);
    const std::size_t p = 1 + rng.index(8);
    const Matrix big = random_matrix(n, p + 1, rng);
    std::vector<std::size_t> idx(p);
    for (std::size_t k = 0; k < p; ++k) idx[k] = k;
    const SingularSpectrum sb = singular_spectrum(take_columns(big, idx));
    const SingularSpectrum sbb = singular_spectrum(big);
    o.require(sbb.max() >= sb.max() - 1e-12, "sigma_max decreased on append");
    if (p < n) o.require(sbb.min() <= sb.min() + 1e-12, "tall sigma_min increased on append");
    else o.require(sbb.min() >= sb.min() - 1e-12, "wide sigma_min decreased on append");
    checks += 2;
  }
  // sigma_max of unit columns.
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.index(6);
    const std::size_t p = n + rng.index(8);
    const Matrix b = unit_columns(random_matrix(n, p, rng));
    const double bound = std::sqrt(static_cast<double>(p) / static_cast<double>(n));
    o.require(singular_spectrum(b).max() >= bound * (1.0 - 1e-12) && bound >= 1.0,
              "sigma_max below sqrt(p/n)");
    ++checks;
  }
  // gamma_{r1 r2}[j] strictly increasing and above sqrt(m).
  for (std::size_t n : {10u, 50u, 100u, 400u}) {
    for (double beta : {1.2, 2.0, 5.0}) {
      const RandomDictSpec spec(n, static_cast<std::size_t>(beta * n));
      for (double r1 : {0.0, 0.3, 1.0}) {
        for (double frac : {0.0, 0.5, 0.9}) {
          const double r2 = frac * (1.0 - std::sqrt(static_cast<double>(n - 1) / n));
          double prev = 0.0;
          for (std::size_t j = 1; j < n; ++j) {
            const double g = gamma_seq(spec, j, r1, r2);
            o.require(g > prev && g > std::sqrt(static_cast<double>(spec.m)),
                      "gamma_r1r2 not increasing or not above sqrt(m)");
            prev = g;
            ++checks;
          }
        }
      }
    }
  }
  // Gamma(x) strictly increasing on [0, b^2).
  for (double p : {1.0, 2.0, 6.0}) {
    for (double a : {1.0, 1.5}) {
      for (double b : {1.0, 0.7, 0.3}) {
        if (p < b * b) continue;
        double prev = gamma_analog(0.0, p, a, b);
        for (int k = 1; k < 1000; ++k) {
          const double x = b * b * k / 1000.0;
          const double g = gamma_analog(x, p, a, b);
          o.require(g > prev, "Gamma not increasing");
          prev = g;
          ++checks;
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " checks, 0 violations";
  return o;
}

Outcome c8_analog_identity() {
  Outcome o;
  double worst = 0.0;
  const std::size_t ns[] = {20, 60, 150, 400};
  const double ratios[] = {1.5, 3.0};
  int points = 0;
  for (std::size_t n : ns) {
    for (double ratio : ratios) {
      const std::size_t m = static_cast<std::size_t>(ratio * n);
      const RandomDictSpec spec(n, m);
      const double r1 = 0.25;
      const double r2 = 0.1;
      for (double f : {0.05, 0.3, 0.6}) {
        if (points == 20) break;
        const std::size_t j = std::max<std::size_t>(1, static_cast<std::size_t>(f * n));
        const double lhs = std::sqrt(static_cast<double>(n)) *
                           gamma_analog(static_cast<double>(j) / n, static_cast<double>(m) / n,
                                        1.0 + r1, 1.0 - r2);
        const double rhs = gamma_seq(spec, j, r1, r2);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        ++points;
      }
    }
  }
  o.require(points == 20, "grid has " + std::to_string(points) + " points");
  o.require(worst < 1e-12, "relative gap " + fmt("%.3e", worst));
  if (o.pass) o.detail = "20 points, worst relative gap " + fmt("%.2e", worst);
  return o;
}

Outcome c9_szarek() {
  Outcome o;
  const SzarekReport r = szarek_empirical_check(200, 50, 0.3, 2000, 9);
  o.require(r.within_bound(), "frequencies " + fmt("%.4g", r.freq_max) + "/" +
                                  fmt("%.4g", r.freq_min) + " exceed bound");
  if (o.pass) {
    o.detail = "freq(max) = " + fmt("%.4g", r.freq_max) + ", freq(min) = " + fmt("%.4g", r.freq_min) +
               ", limit " + fmt("%.3g", r.tail_bound + r.allowance);
  }
  return o;
}

Outcome c10_curve() {
  Outcome o;
  const std::vector<double> cs = {0.25, 0.5, 0.75, 1.0};
  const std::size_t steps = 91;
  const auto rows = sparsity_curve(1.0, 10.0, steps, cs);
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].residual));
    if (i % steps != 0) o.require(rows[i].u_star < rows[i - 1].u_star, "not decreasing in beta");
    if (i >= steps) o.require(rows[i].u_star > rows[i - steps].u_star, "not increasing in c");
  }
  o.require(worst < 1e-12, "residual " + fmt("%.3e", worst));
  const double u = sparsity_supremum(2.0, 1.0);
  o.require(sparsity_equation(0.05, 2.0, 1.0) < 0.0 && sparsity_equation(0.07, 2.0, 1.0) > 0.0,
            "no sign change on (0.05, 0.07)");
  o.require(u > 0.05 && u < 0.07, "u*(2, 1) = " + fmt("%.6g", u));
  if (o.pass) {
    o.detail = std::to_string(rows.size()) + " rows, max residual " + fmt("%.2e", worst) +
               ", u*(2,1) = " + fmt("%.10f", u);
  }
  return o;
}

Outcome c11_reductions() {
  Outcome o;
  double worst = 0.0;
  auto rel = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / b; };
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ProblemInstance inst = make_instance(5, 8, 1, 0.0, derive_seed(1111, seed), seed % 2 == 0);
    const Dictionary d(inst.dictionary);
    const SpectralProfile p = gamma_profile(d);
    const Vector s_hat = sl0_solve(inst.dictionary, inst.x, {.sigma_min = 0.2});
    for (std::size_t ell = 1; ell <= p.q; ++ell) {
      const double t0 = tight_bound(p, s_hat, ell).value();
      const double t1 = noisy_tight_bound(d, s_hat, ell, {}).value();
      worst = std::max(worst, rel(t1, t0));
      if (d.is_normalized()) {
        const double l0 = loose_bound(p, s_hat, ell).value();
        const double l1 = noisy_loose_bound(p, s_hat, ell, {}).value();
        worst = std::max(worst, rel(l1, l0));
      }
      const NoiseBudget noise{0.03, 0.07};
      if (d.is_normalized()) {
        const double stab = stability_bound(p, ell, noise).value();
        worst = std::max(worst, rel(stab, noise.total() / p.sigma_min(ell)));
      }
      const Vector zero(d.m(), 0.0);
      o.require(tight_bound(p, zero, ell).value() == 0.0 &&
                    noisy_tight_bound(d, zero, ell, {}).value() == 0.0,
                "alpha = 0, Delta = 0 does not give 0");
      if (d.is_normalized()) {
        o.require(loose_bound(p, zero, ell).value() == 0.0 &&
                      noisy_loose_bound(p, zero, ell, {}).value() == 0.0,
                  "alpha = 0, Delta = 0 does not give 0 (loose)");
      }
    }
  }
  o.require(worst < 1e-12, "relative gap " + fmt("%.3e", worst));
  if (o.pass) o.detail = "worst relative gap " + fmt("%.2e", worst);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "reference eta/gamma sequences of the 3x4 matrix", 1.0, c1_reference_sequences},
      {2, "tight example reproduces beta, A and equality", 1.0, c2_tight_example},
      {3, "theta0 constant", 1.0, c3_theta0},
      {4, "recovery experiment ordering and corridors", 30.0, c4_experiment},
      {5, "soundness over 10^4 randomized instances", 300.0, c5_soundness},
      {6, "oracle equivalence of spectra and enumerators", 60.0, c6_oracles},
      {7, "monotonicity and interlacing properties", 60.0, c7_monotonicity},
      {8, "continuous-analog identity on a 20-point grid", 1.0, c8_analog_identity},
      {9, "Davidson-Szarek empirical check", 60.0, c9_szarek},
      {10, "sparsity-limit curve", 10.0, c10_curve},
      {11, "reduction identities", 30.0, c11_reductions},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " [runtime " + fmt("%.2f", secs) + " s over limit " + fmt("%.0f", c.limit_seconds) + " s]";
    }
    failed += !o.pass;
    std::printf("%s criterion %2d: %s -- %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
