#include "sparsecert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "sparsecert/error.hpp"

namespace sparsecert {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::FirstBound: return "FirstBound";
    case BoundKind::LooseSigma: return "LooseSigma";
    case BoundKind::TightGamma: return "TightGamma";
    case BoundKind::NoisyLoose: return "NoisyLoose";
    case BoundKind::NoisyTight: return "NoisyTight";
  }
  return "Unknown";
}

double BoundCertificate::value() const {
  if (bound) return *bound;
  std::string msg = std::string(to_string(theorem)) + " withheld:";
  for (const auto& c : checks)
    if (!c.passed) msg += " [" + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "]";
  throw PreconditionError(msg);
}

std::string BoundCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["theorem"] = to_string(theorem);
  j["ell"] = ell;
  j["alpha"] = alpha;
  j["delta"] = delta_total;
  j["bound"] = bound ? nlohmann::ordered_json(*bound) : nlohmann::ordered_json(nullptr);
  j["assumptions"] = assumptions;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    if (!c.detail.empty()) e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j.dump();
}

double h_stat(std::span<const double> s, std::size_t k) {
  if (k < 1 || k > s.size()) {
    throw InvalidInputError("h_stat: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(s.size()) + "]");
  }
  std::vector<double> mags(s.size());
  std::transform(s.begin(), s.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k - 1), mags.end(),
                   std::greater<>());
  return mags[k - 1];
}

double alpha_for(std::span<const double> s_hat, std::size_t ell) {
  return h_stat(s_hat, ell / 2 + 1);
}

namespace {

void require_vector(std::span<const double> s_hat, std::size_t m) {
  if (s_hat.size() != m) {
    throw InvalidInputError("estimate has " + std::to_string(s_hat.size()) +
                            " entries but the dictionary has " + std::to_string(m) +
                            " columns");
  }
  for (double v : s_hat)
    if (!std::isfinite(v)) throw InvalidInputError("estimate has a non-finite entry");
}

void require_noise(NoiseBudget noise) {
  if (!(noise.epsilon >= 0.0) || !(noise.delta >= 0.0) || !std::isfinite(noise.total())) {
    throw InvalidInputError("epsilon and delta must be finite and non-negative");
  }
}

std::string sparsity_assumption(std::size_t ell) {
  return "||s0||_0 <= " + std::to_string(ell / 2) + " (floor(ell/2))";
}

// Shared scaffolding: range checks on ell against q and the profile depth.
BoundCertificate start(BoundKind kind, const SpectralProfile& p, std::span<const double> s_hat,
                       std::size_t ell) {
  require_vector(s_hat, p.m);
  BoundCertificate c;
  c.theorem = kind;
  c.ell = ell;
  c.checks.push_back({"1 <= ell <= q", ell >= 1 && ell <= p.q,
                      "ell = " + std::to_string(ell) + ", q = " + std::to_string(p.q)});
  c.checks.push_back({"profile depth covers ell", ell <= p.depth(),
                      "depth = " + std::to_string(p.depth())});
  c.alpha = ell >= 1 ? alpha_for(s_hat, ell) : 0.0;
  c.assumptions.push_back(sparsity_assumption(ell));
  return c;
}

void add_unit_norm_check(BoundCertificate& c, bool normalized) {
  c.checks.push_back({"unit-norm columns", normalized,
                      normalized ? "" : "this bound is refused for non-normalized dictionaries"});
}

void add_noise_assumptions(BoundCertificate& c, NoiseBudget noise) {
  c.delta_total = noise.total();
  c.assumptions.push_back("||x - A s0||_2 <= epsilon = " + format_exact(noise.epsilon));
  c.assumptions.push_back("||A s_hat - x||_2 <= delta = " + format_exact(noise.delta));
}

bool passed(const BoundCertificate& c) {
  return std::all_of(c.checks.begin(), c.checks.end(), [](const Check& k) { return k.passed; });
}

}  // namespace

BoundCertificate first_bound(const SpectralProfile& p, double g_constant,
                             std::span<const double> s_hat) {
  require_vector(s_hat, p.m);
  BoundCertificate c;
  c.theorem = BoundKind::FirstBound;
  c.ell = p.n;
  c.alpha = alpha_for(s_hat, p.n);
  c.assumptions.push_back(sparsity_assumption(p.n));
  add_unit_norm_check(c, p.normalized);
  c.checks.push_back({"URP (q = n)", p.q == p.n,
                      "q = " + std::to_string(p.q) + ", n = " + std::to_string(p.n)});
  if (passed(c)) c.bound = (g_constant + 1.0) * static_cast<double>(p.m) * c.alpha;
  return c;
}

BoundCertificate first_bound(const Dictionary& dict, const SpectralProfile& p,
                             std::span<const double> s_hat, const ScanOptions& opts) {
  if (p.q != p.n || !p.normalized) return first_bound(p, 0.0, s_hat);
  return first_bound(p, g_constant(dict.matrix(), opts), s_hat);
}

BoundCertificate loose_bound(const SpectralProfile& p, std::span<const double> s_hat,
                             std::size_t ell) {
  BoundCertificate c = start(BoundKind::LooseSigma, p, s_hat, ell);
  add_unit_norm_check(c, p.normalized);
  if (passed(c)) {
    c.bound = (1.0 / p.sigma_min(ell) + 1.0) * static_cast<double>(p.m) * c.alpha;
  }
  return c;
}

BoundCertificate tight_bound(const SpectralProfile& p, std::span<const double> s_hat,
                             std::size_t ell) {
  BoundCertificate c = start(BoundKind::TightGamma, p, s_hat, ell);
  if (passed(c)) {
    const double g = p.normalized ? p.gamma_bar(ell) : p.gamma_bar_prime(ell);
    c.bound = g * c.alpha;
  }
  return c;
}

BoundCertificate noisy_loose_bound(const SpectralProfile& p, std::span<const double> s_hat,
                                   std::size_t ell, NoiseBudget noise) {
  require_noise(noise);
  BoundCertificate c = start(BoundKind::NoisyLoose, p, s_hat, ell);
  add_unit_norm_check(c, p.normalized);
  add_noise_assumptions(c, noise);
  if (passed(c)) {
    const double smin = p.sigma_min(ell);
    c.bound = (1.0 / smin + 1.0) * static_cast<double>(p.m) * c.alpha + c.delta_total / smin;
  }
  return c;
}

BoundCertificate stability_bound(const SpectralProfile& p, std::size_t ell, NoiseBudget noise) {
  const std::vector<double> zero(p.m, 0.0);
  return noisy_loose_bound(p, zero, ell, noise);
}

BoundCertificate noisy_tight_bound(const PartitionTable& t, std::span<const double> s_hat,
                                   std::size_t ell, NoiseBudget noise) {
  require_vector(s_hat, t.m);
  require_noise(noise);
  BoundCertificate c;
  c.theorem = BoundKind::NoisyTight;
  c.ell = ell;
  c.checks.push_back({"1 <= ell <= table depth", ell >= 1 && ell <= t.ell,
                      "ell = " + std::to_string(ell) + ", table depth = " +
                          std::to_string(t.ell)});
  c.alpha = ell >= 1 ? alpha_for(s_hat, ell) : 0.0;
  c.assumptions.push_back(sparsity_assumption(ell));
  add_noise_assumptions(c, noise);
  if (!passed(c)) return c;

  const double a = c.alpha;
  const double d = c.delta_total;
  double best = t.normalized ? 0.0 : static_cast<double>(t.m) * a * a;
  for (const PartitionEntry& e : t.entries) {
    if (e.j > ell) continue;
    const double ms = static_cast<double>(t.m - e.j);
    // m_s a^2 + (sigma_max(Bc) sqrt(m_s) a + d)^2 / sigma_min(B)^2, expanded.
    const double ratio = e.sigma_max_bc / e.sigma_min_b;
    const double f = (1.0 + ratio * ratio) * ms * a * a +
                     2.0 * ratio * std::sqrt(ms) * a * d / e.sigma_min_b +
                     d * d / (e.sigma_min_b * e.sigma_min_b);
    best = std::max(best, f);
  }
  c.bound = std::sqrt(best);
  return c;
}

BoundCertificate noisy_tight_bound(const Dictionary& dict, std::span<const double> s_hat,
                                   std::size_t ell, NoiseBudget noise,
                                   const ScanOptions& opts) {
  require_vector(s_hat, dict.m());
  if (ell < 1 || ell >= dict.m()) {
    throw InvalidInputError("noisy_tight_bound: ell must lie in [1, m - 1]");
  }
  return noisy_tight_bound(partition_table(dict, ell, opts), s_hat, ell, noise);
}

// ---------------------------------------------------------------------------

double tight_example_theta0_degrees() {
  return std::acos((std::sqrt(17.0) - 1.0) / 4.0) * 180.0 / std::numbers::pi;
}

bool TightExample::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

TightExample tight_example(double theta_degrees, double alpha, double rel_tol) {
  const double theta0 = tight_example_theta0_degrees();
  if (!(theta_degrees > 0.0 && theta_degrees < theta0)) {
    throw DomainError("theta must lie in (0, theta0) with theta0 = acos((sqrt(17)-1)/4) ~ " +
                      format_exact(theta0) + " degrees; got " + format_exact(theta_degrees));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");

  TightExample ex;
  ex.theta_degrees = theta_degrees;
  ex.alpha = alpha;
  const double th = theta_degrees * std::numbers::pi / 180.0;
  const double half_sin = std::sin(th / 2.0);
  ex.beta = alpha / (2.0 * half_sin);
  ex.a = Matrix::from_rows({{1.0, std::cos(th), half_sin},
                            {0.0, std::sin(th), -std::cos(th / 2.0)}});
  ex.s0 = {ex.beta, 0.0, 0.0};
  ex.s_hat = {0.0, ex.beta, alpha};
  ex.x = ex.a.apply(ex.s0);
  // 1 - cos(theta) = 2 sin^2(theta/2) avoids cancellation for small angles.
  ex.gamma_bar_closed_form = std::sqrt(1.0 + 1.0 / (2.0 * half_sin * half_sin));

  const Dictionary dict(ex.a);
  ex.profile = gamma_profile(dict, 2, ScanOptions{.workers = 1});
  ex.certificate = tight_bound(ex.profile, ex.s_hat, 2);
  ex.actual_error = norm2(subtract(ex.s_hat, ex.s0));

  const double residual = norm2(subtract(ex.a.apply(ex.s_hat), ex.x));
  const double xnorm = norm2(ex.x);
  ex.checks.push_back({"s0 and s_hat both solve A s = x", residual <= 1e-12 * xnorm,
                       "||A s_hat - x|| = " + format_exact(residual)});
  const double gbar = ex.profile.gamma_bar(2);
  const double g_rel = std::abs(gbar - ex.gamma_bar_closed_form) / ex.gamma_bar_closed_form;
  ex.checks.push_back({"gamma_bar = gamma_2 = sqrt(1 + 1/(1 - cos theta))",
                       g_rel <= rel_tol && ex.profile.gamma(2) >= ex.profile.gamma(1),
                       "gamma_1 = " + format_exact(ex.profile.gamma(1)) +
                           ", gamma_2 = " + format_exact(ex.profile.gamma(2))});
  const double target = ex.gamma_bar_closed_form * alpha;
  const double e_rel = std::abs(ex.actual_error - target) / target;
  ex.checks.push_back({"||s_hat - s0|| = gamma_bar * alpha", e_rel <= rel_tol,
                       "relative gap " + format_exact(e_rel)});
  return ex;
}

}  // namespace sparsecert
