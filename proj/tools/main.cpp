#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsecert/certify.hpp"
#include "sparsecert/dict_analysis.hpp"
#include "sparsecert/error.hpp"
#include "sparsecert/experiment.hpp"
#include "sparsecert/random_dict.hpp"
#include "sparsecert/recover.hpp"
#include "sparsecert/rng.hpp"

using namespace sparsecert;

namespace {

enum Exit : int { kOk = 0, kPrecondition = 2, kBudget = 3, kIo = 4 };

std::string six(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Machine output goes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot open " + path + " for writing");
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  double budget = default_subset_budget();
  unsigned workers = 0;
  std::string out;

  ScanOptions scan() const { return {budget, workers}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--budget", c.budget,
                  "Max subsets per combinatorial level (default from SPARSECERT_BUDGET or 1e7)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--out", c.out, "Write machine-readable output here instead of stdout");
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  Common common;
  std::string matrix;
  std::size_t depth = 0;
};

int run_analyze(const AnalyzeArgs& a) {
  const Dictionary dict(read_matrix_file(a.matrix));
  const ScanOptions scan = a.common.scan();
  const KruskalRank rank = kruskal_rank(dict.matrix(), scan);
  const SpectralProfile p = gamma_profile(dict, rank, a.depth, scan);
  Sink sink(a.common.out);
  write_profile_csv(sink.out(), p);
  std::cerr << "n=" << p.n << " m=" << p.m << " q=" << p.q << " spark=" << p.spark
            << (rank.spark_witnessed ? "" : " (upper bound)")
            << " normalized=" << (p.normalized ? "yes" : "no") << " depth=" << p.depth() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  Common common;
  std::string matrix;
  std::string shat;
  std::size_t ell = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::string bound = "auto";
};

int run_certify(const CertifyArgs& a) {
  const Dictionary dict(read_matrix_file(a.matrix));
  const Vector s_hat = read_vector_file(a.shat);
  if (s_hat.size() != dict.m()) {
    throw InvalidInputError("estimate has " + std::to_string(s_hat.size()) +
                            " entries but the matrix has " + std::to_string(dict.m()) +
                            " columns");
  }
  const ScanOptions scan = a.common.scan();
  const NoiseBudget noise{a.eps, a.delta};
  std::string kind = a.bound;
  if (kind == "auto") kind = noise.total() > 0.0 ? "noisy-tight" : "tight";

  const KruskalRank rank = kruskal_rank(dict.matrix(), scan);
  const std::size_t ell = a.ell ? a.ell : rank.q;
  BoundCertificate cert;
  if (kind == "noisy-tight") {
    cert = noisy_tight_bound(dict, s_hat, ell, noise, scan);
  } else {
    const std::size_t depth = kind == "first" ? rank.q : std::min(ell, rank.q);
    const SpectralProfile p = gamma_profile(dict, rank, depth, scan);
    if (kind == "first") {
      cert = first_bound(dict, p, s_hat, scan);
    } else if (kind == "loose") {
      cert = loose_bound(p, s_hat, ell);
    } else if (kind == "tight") {
      cert = tight_bound(p, s_hat, ell);
    } else if (kind == "noisy-loose") {
      cert = noisy_loose_bound(p, s_hat, ell, noise);
    } else {
      cert = stability_bound(p, ell, noise);
    }
  }
  Sink sink(a.common.out);
  sink.out() << cert.to_json() << '\n';
  if (!cert.ok()) {
    std::cerr << "refused: " << to_string(cert.theorem) << " preconditions failed\n";
    for (const auto& c : cert.checks)
      if (!c.passed) std::cerr << "  " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
    return kPrecondition;
  }
  std::cerr << to_string(cert.theorem) << " bound = " << six(*cert.bound) << " (ell=" << ell
            << ", alpha=" << six(cert.alpha) << ", Delta=" << six(cert.delta_total) << ")\n";
  if (cert.certifies_uniqueness()) std::cerr << "uniqueness certified\n";
  for (const auto& s : cert.assumptions) std::cerr << "assumes " << s << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct TightArgs {
  Common common;
  double theta = 5.0;
  double alpha = 0.2;
  std::string write_prefix;
};

int run_tight(const TightArgs& a) {
  const TightExample ex = tight_example(a.theta, a.alpha);
  nlohmann::ordered_json j;
  j["theta_degrees"] = ex.theta_degrees;
  j["theta0_degrees"] = tight_example_theta0_degrees();
  j["alpha"] = ex.alpha;
  j["beta"] = ex.beta;
  j["A"] = {{ex.a(0, 0), ex.a(0, 1), ex.a(0, 2)}, {ex.a(1, 0), ex.a(1, 1), ex.a(1, 2)}};
  j["s0"] = ex.s0;
  j["s_hat"] = ex.s_hat;
  j["gamma_bar"] = ex.profile.gamma_bar(2);
  j["gamma_bar_closed_form"] = ex.gamma_bar_closed_form;
  j["bound"] = ex.certificate.value();
  j["actual_error"] = ex.actual_error;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : ex.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  Sink sink(a.common.out);
  sink.out() << j.dump() << '\n';
  std::cerr << "beta = " << six(ex.beta) << ", gamma_bar * alpha = " << six(ex.certificate.value())
            << ", ||s_hat - s0|| = " << six(ex.actual_error) << '\n';
  for (const auto& c : ex.checks)
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
  if (!a.write_prefix.empty()) {
    write_matrix_file(a.write_prefix + ".matrix", ex.a);
    std::ofstream s(a.write_prefix + ".shat");
    for (double v : ex.s_hat) s << format_exact(v) << '\n';
    if (!s) throw ParseError("cannot write " + a.write_prefix + ".shat");
  }
  return ex.all_passed() ? kOk : kPrecondition;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  Common common;
  ExperimentConfig cfg;
};

int run_experiment_cmd(ExperimentArgs a) {
  a.cfg.scan = a.common.scan();
  const ExperimentReport rep = run_experiment(a.cfg, a.common.workers);
  Sink sink(a.common.out);
  write_experiment_csv(sink.out(), rep);
  write_experiment_summary(std::cerr, rep);
  return kOk;
}

// ---------------------------------------------------------------------------

struct ProbArgs {
  Common common;
  std::size_t n = 100;
  std::size_t m = 200;
  std::size_t ell = 2;
  double r1 = 0.5;
  double r2 = 0.5;
};

int run_prob(const ProbArgs& a) {
  const ProbBoundReport r = gamma_tail_bound(RandomDictSpec(a.n, a.m), a.ell, a.r1, a.r2);
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["ell"] = r.ell;
  j["r1"] = r.r1;
  j["r2"] = r.r2;
  j["gamma_value"] = r.gamma_value;
  j["binom_sum"] = r.binom_sum;
  j["log_binom_sum"] = r.log_binom_sum;
  j["binom_estimate_sum"] = r.binom_estimate_sum;
  j["failure_prob_rhs"] = r.failure_prob_rhs;
  j["log_failure_prob_rhs"] = r.log_failure_prob_rhs;
  j["log_space"] = r.log_space;
  j["vacuous"] = r.vacuous;
  j["regime_ok"] = r.regime_ok;
  j["regime_margin"] = r.regime_margin;
  Sink sink(a.common.out);
  sink.out() << j.dump() << '\n';
  std::cerr << "P(gamma_bar_" << r.ell << " > " << six(r.gamma_value)
            << ") <= " << six(r.failure_prob_rhs) << '\n';
  if (r.vacuous) std::cerr << "vacuous bound (rhs >= 1)\n";
  std::cerr << "exponential regime: " << (r.regime_ok ? "yes" : "no") << " (margin "
            << six(r.regime_margin) << ")\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  Common common;
  double beta_min = 1.0;
  double beta_max = 10.0;
  std::size_t steps = 91;
  std::vector<double> c{0.25, 0.5, 0.75, 1.0};
};

int run_curve(const CurveArgs& a) {
  const auto rows = sparsity_curve(a.beta_min, a.beta_max, a.steps, a.c);
  Sink sink(a.common.out);
  write_sparsity_csv(sink.out(), rows);
  std::cerr << rows.size() << " rows\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct SzarekArgs {
  Common common;
  std::size_t n = 200;
  std::size_t p = 50;
  double r = 0.3;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
};

int run_szarek(const SzarekArgs& a) {
  const SzarekReport rep = szarek_empirical_check(a.n, a.p, a.r, a.trials, a.seed, a.common.workers);
  Sink sink(a.common.out);
  write_szarek_csv(sink.out(), rep);
  std::cerr << "master_seed=" << rep.master_seed << " rng=" << kRngAlgorithm << '\n'
            << "freq(sigma_max > " << six(rep.threshold_max) << ") = " << six(rep.freq_max) << '\n'
            << "freq(sigma_min < " << six(rep.threshold_min) << ") = " << six(rep.freq_min) << '\n'
            << "tail bound " << six(rep.tail_bound) << " + allowance " << six(rep.allowance) << ": "
            << (rep.within_bound() ? "within" : "EXCEEDED") << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::size_t n = 8;
  std::size_t m = 12;
  std::size_t p = 2;
  double eps = 0.0;
  std::uint64_t seed = 1;
  bool raw = false;
  std::optional<double> sigma_min;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const ProblemInstance inst = make_instance(a.n, a.m, a.p, a.eps, a.seed, !a.raw);
  write_instance(a.out, inst);
  std::cerr << "wrote " << a.out << ".{matrix,x,s0,json} seed=" << a.seed << '\n';
  if (a.sigma_min) {
    const Vector s = sl0_solve(inst.dictionary, inst.x, {.sigma_min = *a.sigma_min});
    std::ofstream f(a.out + ".shat");
    for (double v : s) f << format_exact(v) << '\n';
    if (!f) throw ParseError("cannot write " + a.out + ".shat");
    std::cerr << "wrote " << a.out << ".shat, ||s_hat - s0|| = "
              << six(norm2(subtract(s, inst.s0))) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified error bounds for sparse solutions of underdetermined systems"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "Kruskal rank and sigma_min/eta/gamma profile");
  c_an->add_option("--matrix", an.matrix, "Matrix file")->required();
  c_an->add_option("--depth", an.depth, "Levels to compute (0 = q)");
  add_common(c_an, an.common);

  CertifyArgs ce;
  auto* c_ce = app.add_subcommand("certify", "Bound ||s_hat - s0|| for an estimate");
  c_ce->add_option("--matrix", ce.matrix, "Matrix file")->required();
  c_ce->add_option("--shat", ce.shat, "Estimate file (one value per entry)")->required();
  c_ce->add_option("--ell", ce.ell, "Sparsity level ell (0 = q)");
  c_ce->add_option("--eps", ce.eps, "Measurement noise norm")->check(CLI::NonNegativeNumber);
  c_ce->add_option("--delta", ce.delta, "Residual tolerance")->check(CLI::NonNegativeNumber);
  c_ce->add_option("--bound", ce.bound, "Which bound")
      ->check(CLI::IsMember({"auto", "first", "loose", "tight", "noisy-loose", "noisy-tight",
                             "stability"}));
  add_common(c_ce, ce.common);

  TightArgs ti;
  auto* c_ti = app.add_subcommand("tight-example", "Build and verify the three-atom tight example");
  c_ti->add_option("--theta", ti.theta, "Angle in degrees");
  c_ti->add_option("--alpha", ti.alpha, "alpha > 0");
  c_ti->add_option("--write", ti.write_prefix, "Also write <prefix>.matrix and <prefix>.shat");
  add_common(c_ti, ti.common);

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "Repeated SL0 recovery with bound ratios");
  c_ex->add_option("--n", ex.cfg.n);
  c_ex->add_option("--m", ex.cfg.m);
  c_ex->add_option("--p", ex.cfg.p);
  c_ex->add_option("--trials", ex.cfg.trials);
  c_ex->add_option("--sigma-min", ex.cfg.sl0.sigma_min, "SL0 final sigma");
  c_ex->add_option("--seed", ex.cfg.master_seed, "Master seed");
  add_common(c_ex, ex.common);

  ProbArgs pr;
  auto* c_pr = app.add_subcommand("prob-bound", "Tail bound for gamma_bar of a Gaussian dictionary");
  c_pr->add_option("--n", pr.n);
  c_pr->add_option("--m", pr.m);
  c_pr->add_option("--ell", pr.ell);
  c_pr->add_option("--r1", pr.r1);
  c_pr->add_option("--r2", pr.r2);
  add_common(c_pr, pr.common);

  CurveArgs cu;
  auto* c_cu = app.add_subcommand("sparsity-curve", "Supremum sparsity u* versus beta = m/n");
  c_cu->add_option("--beta-min", cu.beta_min);
  c_cu->add_option("--beta-max", cu.beta_max);
  c_cu->add_option("--steps", cu.steps);
  c_cu->add_option("--c", cu.c, "One or more c values in (0, 1]")->delimiter(',');
  add_common(c_cu, cu.common);

  SzarekArgs sz;
  auto* c_sz = app.add_subcommand("szarek-check", "Monte Carlo check of the singular-value edges");
  c_sz->add_option("--n", sz.n);
  c_sz->add_option("--p", sz.p);
  c_sz->add_option("--r", sz.r);
  c_sz->add_option("--trials", sz.trials);
  c_sz->add_option("--seed", sz.seed);
  add_common(c_sz, sz.common);

  GenArgs ge;
  auto* c_ge = app.add_subcommand("gen-instance", "Write a random sparse test problem");
  c_ge->add_option("--n", ge.n);
  c_ge->add_option("--m", ge.m);
  c_ge->add_option("--p", ge.p);
  c_ge->add_option("--eps", ge.eps)->check(CLI::NonNegativeNumber);
  c_ge->add_option("--seed", ge.seed);
  c_ge->add_flag("--raw", ge.raw, "Keep N(0,1) columns instead of normalizing");
  c_ge->add_option("--sigma-min", ge.sigma_min, "Also solve with SL0 and write <out>.shat");
  c_ge->add_option("--out", ge.out, "Output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    if (*c_an) return run_analyze(an);
    if (*c_ce) return run_certify(ce);
    if (*c_ti) return run_tight(ti);
    if (*c_ex) return run_experiment_cmd(ex);
    if (*c_pr) return run_prob(pr);
    if (*c_cu) return run_curve(cu);
    if (*c_sz) return run_szarek(sz);
    if (*c_ge) return run_gen(ge);
  } catch (const BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "I/O or parse error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  return kOk;
}
