#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsecert/dict_analysis.hpp"
#include "sparsecert/recover.hpp"

namespace sparsecert {

struct ExperimentConfig {
  std::size_t n = 8;
  std::size_t m = 12;
  std::size_t p = 2;
  std::size_t trials = 100;
  Sl0Options sl0{.sigma_min = 0.1};
  std::uint64_t master_seed = 1;
  ScanOptions scan{};

  /// Every bound uses ell = 2p.
  std::size_t ell() const noexcept { return 2 * p; }
};

/// One repetition. `first_bound` is (G_A + 1) m alpha_{s,n}, `loose_bound`
/// is (1/sigma_min^(2p) + 1) m alpha and `tight_bound` is gamma_bar_2p alpha.
struct TrialReport {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double actual_error = 0.0;
  double first_bound = 0.0;
  double loose_bound = 0.0;
  double tight_bound = 0.0;
  double first_ratio = 0.0;
  double loose_ratio = 0.0;
  double tight_ratio = 0.0;
  /// "ok", or the reason the trial produced no bounds.
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialReport> trials;
  /// Arithmetic means of the ratios over the ok trials.
  double mean_first_ratio = 0.0;
  double mean_loose_ratio = 0.0;
  double mean_tight_ratio = 0.0;
  std::size_t ok_trials = 0;
};

/// Trial t draws make_instance(n, m, p, 0, derive_seed(master_seed, t), true),
/// solves it with SL0 and certifies the estimate. Trials run in parallel over
/// `workers` threads; the report is independent of the worker count.
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned workers = 0);

/// CSV: trial,seed,actual_error,first_bound,loose_bound,tight_bound,
/// first_ratio,loose_ratio,tight_ratio,status
void write_experiment_csv(std::ostream& out, const ExperimentReport& report);

/// Human-readable config echo and means (6 significant digits).
void write_experiment_summary(std::ostream& out, const ExperimentReport& report);

}  // namespace sparsecert
