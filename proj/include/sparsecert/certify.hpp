#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecert/dict_analysis.hpp"
#include "sparsecert/matrix.hpp"

namespace sparsecert {

enum class BoundKind { FirstBound, LooseSigma, TightGamma, NoisyLoose, NoisyTight };

std::string_view to_string(BoundKind kind);

/// One named precondition and whether it held.
struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

/// Measurement noise norm epsilon (||x - A s0|| <= epsilon) and residual
/// tolerance delta (||A s_hat - x|| <= delta). Only their sum enters a bound,
/// so a caller that knows just the total may put all of it in one field.
struct NoiseBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  double total() const noexcept { return epsilon + delta; }
  static NoiseBudget combined(double total) { return {0.0, total}; }
};

/// Result of a certification attempt. `bound` is withheld whenever a check
/// failed. The sparsity hypothesis on the unknown s0 can never be checked
/// and is recorded under `assumptions`.
struct BoundCertificate {
  BoundKind theorem = BoundKind::TightGamma;
  std::size_t ell = 0;
  double alpha = 0.0;
  double delta_total = 0.0;
  std::optional<double> bound;
  std::vector<std::string> assumptions;
  std::vector<Check> checks;

  bool ok() const noexcept { return bound.has_value(); }
  /// The bound; throws PreconditionError listing the failed checks otherwise.
  double value() const;
  /// A zero bound proves s_hat = s0 under the recorded assumptions.
  bool certifies_uniqueness() const noexcept { return bound && *bound == 0.0; }
  /// Single-line JSON with a fixed key order:
  /// theorem, ell, alpha, delta, bound, assumptions, checks.
  std::string to_json() const;
};

/// Magnitude of the k-th largest-magnitude entry of s (k is 1-based).
double h_stat(std::span<const double> s, std::size_t k);

/// alpha_{s,ell} = h(floor(ell/2) + 1, s).
double alpha_for(std::span<const double> s_hat, std::size_t ell);

/// (G_A + 1) m alpha_{s,n}. Needs unit-norm columns and q = n.
BoundCertificate first_bound(const SpectralProfile& profile, double g_constant,
                             std::span<const double> s_hat);
/// Computes G_A itself (exhaustive over all subsets of at most n columns).
BoundCertificate first_bound(const Dictionary& dict, const SpectralProfile& profile,
                             std::span<const double> s_hat, const ScanOptions& opts = {});

/// (1/sigma_min^(ell) + 1) m alpha. Unit-norm columns only.
BoundCertificate loose_bound(const SpectralProfile& profile, std::span<const double> s_hat,
                             std::size_t ell);

/// gamma_bar_ell * alpha for unit-norm columns, gamma_bar'_ell * alpha otherwise.
BoundCertificate tight_bound(const SpectralProfile& profile, std::span<const double> s_hat,
                             std::size_t ell);

/// (1/sigma_min^(ell) + 1) m alpha + Delta / sigma_min^(ell). Unit-norm columns only.
BoundCertificate noisy_loose_bound(const SpectralProfile& profile,
                                   std::span<const double> s_hat, std::size_t ell,
                                   NoiseBudget noise);

/// Delta / sigma_min^(ell): the noisy loose bound for an exactly sparse
/// estimate (alpha = 0).
BoundCertificate stability_bound(const SpectralProfile& profile, std::size_t ell,
                                 NoiseBudget noise);

/// sqrt(max(m alpha^2, f)) with f maximised over every partition with at most
/// ell large entries; the m alpha^2 branch is dropped for unit-norm columns.
BoundCertificate noisy_tight_bound(const PartitionTable& table, std::span<const double> s_hat,
                                   std::size_t ell, NoiseBudget noise);
BoundCertificate noisy_tight_bound(const Dictionary& dict, std::span<const double> s_hat,
                                   std::size_t ell, NoiseBudget noise,
                                   const ScanOptions& opts = {});

/// Largest angle (degrees) for which the three-atom construction below
/// attains the tight bound: acos((sqrt(17) - 1) / 4).
double tight_example_theta0_degrees();

/// The three-atom 2 x 3 dictionary with s0 = (beta, 0, 0) and
/// s_hat = (0, beta, alpha), beta = alpha / (2 sin(theta/2)), whose error
/// equals gamma_bar(A) * alpha exactly.
struct TightExample {
  double theta_degrees = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Matrix a;
  Vector s0;
  Vector s_hat;
  Vector x;
  /// sqrt(1 + 1/(1 - cos theta)).
  double gamma_bar_closed_form = 0.0;
  SpectralProfile profile;
  BoundCertificate certificate;
  double actual_error = 0.0;
  std::vector<Check> checks;

  bool all_passed() const;
};

/// Builds and verifies the example. Throws DomainError unless
/// 0 < theta < theta0 and alpha > 0. `rel_tol` applies to the equality checks.
TightExample tight_example(double theta_degrees, double alpha, double rel_tol = 1e-9);

}  // namespace sparsecert
