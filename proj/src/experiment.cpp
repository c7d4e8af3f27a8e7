#include "sparsecert/experiment.hpp"

#include <cstdio>
#include <ostream>

#include "parallel.hpp"
#include "sparsecert/certify.hpp"
#include "sparsecert/error.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert {

namespace {

TrialReport run_trial(const ExperimentConfig& cfg, std::size_t t) {
  TrialReport row;
  row.trial = t;
  row.seed = derive_seed(cfg.master_seed, t);
  // Bounds are computed serially inside a trial; trials are the parallel unit.
  ScanOptions scan = cfg.scan;
  scan.workers = 1;
  try {
    const ProblemInstance inst = make_instance(cfg.n, cfg.m, cfg.p, 0.0, row.seed, true);
    const Vector s_hat = sl0_solve(inst.dictionary, inst.x, cfg.sl0);
    row.actual_error = norm2(subtract(s_hat, inst.s0));
    const Dictionary dict(inst.dictionary);
    const KruskalRank rank = kruskal_rank(dict.matrix(), scan);
    const SpectralProfile profile = gamma_profile(dict, rank, cfg.ell(), scan);
    row.first_bound = first_bound(dict, profile, s_hat, scan).value();
    row.loose_bound = loose_bound(profile, s_hat, cfg.ell()).value();
    row.tight_bound = tight_bound(profile, s_hat, cfg.ell()).value();
    row.first_ratio = row.first_bound / row.actual_error;
    row.loose_ratio = row.loose_bound / row.actual_error;
    row.tight_ratio = row.tight_bound / row.actual_error;
  } catch (const Error& e) {
    row.status = e.what();
  }
  return row;
}

std::string six(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  if (cfg.trials < 1) throw InvalidInputError("trials must be at least 1");
  if (cfg.ell() < 1 || cfg.ell() >= cfg.m) {
    throw InvalidInputError("need 1 <= 2p < m for the experiment");
  }
  ExperimentReport rep;
  rep.config = cfg;
  rep.trials.resize(cfg.trials);
  detail::parallel_for(cfg.trials, workers,
                       [&](std::size_t t) { rep.trials[t] = run_trial(cfg, t); });
  for (const auto& row : rep.trials) {
    if (!row.ok()) continue;
    ++rep.ok_trials;
    rep.mean_first_ratio += row.first_ratio;
    rep.mean_loose_ratio += row.loose_ratio;
    rep.mean_tight_ratio += row.tight_ratio;
  }
  if (rep.ok_trials > 0) {
    const double k = static_cast<double>(rep.ok_trials);
    rep.mean_first_ratio /= k;
    rep.mean_loose_ratio /= k;
    rep.mean_tight_ratio /= k;
  }
  return rep;
}

void write_experiment_csv(std::ostream& out, const ExperimentReport& rep) {
  out << "trial,seed,actual_error,first_bound,loose_bound,tight_bound,first_ratio,loose_ratio,"
         "tight_ratio,status\n";
  for (const auto& r : rep.trials) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << r.trial << ',' << r.seed << ',' << format_exact(r.actual_error) << ','
        << format_exact(r.first_bound) << ',' << format_exact(r.loose_bound) << ','
        << format_exact(r.tight_bound) << ',' << format_exact(r.first_ratio) << ','
        << format_exact(r.loose_ratio) << ',' << format_exact(r.tight_ratio) << ',' << status
        << '\n';
  }
}

void write_experiment_summary(std::ostream& out, const ExperimentReport& rep) {
  const ExperimentConfig& c = rep.config;
  out << "config: n=" << c.n << " m=" << c.m << " p=" << c.p << " ell=" << c.ell()
      << " trials=" << c.trials << " sigma_min=" << six(c.sl0.sigma_min)
      << " sigma_decrease=" << six(c.sl0.sigma_decrease) << " inner_iters=" << c.sl0.inner_iters
      << " mu=" << six(c.sl0.mu) << " master_seed=" << c.master_seed << " rng=" << kRngAlgorithm
      << '\n';
  out << "ok trials: " << rep.ok_trials << " of " << rep.trials.size() << '\n';
  out << "mean first/actual (G_A bound): " << six(rep.mean_first_ratio) << '\n';
  out << "mean loose/actual (sigma_min bound): " << six(rep.mean_loose_ratio) << '\n';
  out << "mean tight/actual (gamma_bar bound): " << six(rep.mean_tight_ratio) << '\n';
}

}  // namespace sparsecert
