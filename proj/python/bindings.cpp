#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sparsecert/certify.hpp"
#include "sparsecert/dict_analysis.hpp"
#include "sparsecert/error.hpp"
#include "sparsecert/experiment.hpp"
#include "sparsecert/matops.hpp"
#include "sparsecert/random_dict.hpp"
#include "sparsecert/recover.hpp"
#include "sparsecert/rng.hpp"

namespace py = pybind11;
using namespace sparsecert;

namespace {

using DenseArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DenseArray& arr) {
  if (arr.ndim() != 2) throw InvalidInputError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  return Matrix(rows, cols, std::vector<double>(arr.data(), arr.data() + rows * cols));
}

Vector to_vector(const DenseArray& arr) {
  if (arr.ndim() != 1) throw InvalidInputError("expected a 1-d array");
  return Vector(arr.data(), arr.data() + arr.shape(0));
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(m.rows()),
                                                 static_cast<py::ssize_t>(m.cols())});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_vector(const Vector& v) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ScanOptions scan_options(std::optional<double> budget, unsigned workers) {
  return ScanOptions{budget.value_or(default_subset_budget()), workers};
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Certified error bounds for sparse solutions of underdetermined systems.";

  auto base = py::register_exception<Error>(mod, "Error");
  py::register_exception<InvalidInputError>(mod, "InvalidInputError", base.ptr());
  py::register_exception<SingularityError>(mod, "SingularityError", base.ptr());
  py::register_exception<BudgetExceededError>(mod, "BudgetExceededError", base.ptr());
  py::register_exception<PreconditionError>(mod, "PreconditionError", base.ptr());
  py::register_exception<DomainError>(mod, "DomainError", base.ptr());
  py::register_exception<UnsupportedSizeError>(mod, "UnsupportedSizeError", base.ptr());
  py::register_exception<ParseError>(mod, "ParseError", base.ptr());

  mod.attr("RNG_ALGORITHM") = std::string(kRngAlgorithm);

  // matops
  mod.def("singular_values",
          [](const DenseArray& a) { return singular_spectrum(to_matrix(a)).values; },
          py::arg("a"), "Singular values in descending order.");
  mod.def("oracle_singular_values",
          [](const DenseArray& a) { return oracle_spectrum(to_matrix(a)).values; },
          py::arg("a"));
  mod.def("spectral_norm", [](const DenseArray& a) { return spectral_norm(to_matrix(a)); },
          py::arg("a"));
  mod.def("pseudoinverse_frobenius",
          [](const DenseArray& a) { return pseudoinverse_frobenius(to_matrix(a)); },
          py::arg("a"));
  mod.def(
      "enumerate_subsets",
      [](std::size_t cols, std::size_t j, std::optional<double> budget) {
        std::vector<std::vector<std::size_t>> out;
        for (const ColumnSubset& s :
             enumerate_subsets(cols, j, budget.value_or(default_subset_budget())))
          out.push_back(s.indices());
        return out;
      },
      py::arg("cols"), py::arg("j"), py::arg("budget") = py::none());

  // dict-analysis
  py::class_<KruskalRank>(mod, "KruskalRank")
      .def_readonly("q", &KruskalRank::q)
      .def_readonly("spark", &KruskalRank::spark)
      .def_readonly("spark_witnessed", &KruskalRank::spark_witnessed)
      .def_readonly("complete", &KruskalRank::complete)
      .def_property_readonly("dependent_witness", [](const KruskalRank& r) {
        return r.dependent_witness ? py::cast(r.dependent_witness->indices()) : py::none();
      });
  mod.def(
      "kruskal_rank",
      [](const DenseArray& a, std::optional<double> budget, unsigned workers) {
        return kruskal_rank(to_matrix(a), scan_options(budget, workers));
      },
      py::arg("a"), py::arg("budget") = py::none(), py::arg("workers") = 0);

  py::class_<SpectralProfile>(mod, "SpectralProfile")
      .def_readonly("n", &SpectralProfile::n)
      .def_readonly("m", &SpectralProfile::m)
      .def_readonly("q", &SpectralProfile::q)
      .def_readonly("spark", &SpectralProfile::spark)
      .def_readonly("normalized", &SpectralProfile::normalized)
      .def_readonly("sigma_min", &SpectralProfile::sigma_min_seq)
      .def_readonly("eta", &SpectralProfile::eta_seq)
      .def_readonly("gamma", &SpectralProfile::gamma_seq)
      .def_readonly("gamma_bar", &SpectralProfile::gamma_bar_seq)
      .def_readonly("gamma_bar_prime", &SpectralProfile::gamma_bar_prime_seq)
      .def_property_readonly("sigma_min_witness",
                             [](const SpectralProfile& p) {
                               std::vector<std::vector<std::size_t>> out;
                               for (const auto& w : p.sigma_min_witness) out.push_back(w.indices());
                               return out;
                             })
      .def_property_readonly("eta_witness",
                             [](const SpectralProfile& p) {
                               std::vector<std::vector<std::size_t>> out;
                               for (const auto& w : p.eta_witness) out.push_back(w.indices());
                               return out;
                             })
      .def_property_readonly("depth", &SpectralProfile::depth)
      .def("to_csv", [](const SpectralProfile& p) {
        std::ostringstream os;
        write_profile_csv(os, p);
        return os.str();
      });
  mod.def(
      "gamma_profile",
      [](const DenseArray& a, std::size_t depth, std::optional<double> budget, unsigned workers) {
        return gamma_profile(Dictionary(to_matrix(a)), depth, scan_options(budget, workers));
      },
      py::arg("a"), py::arg("depth") = 0, py::arg("budget") = py::none(), py::arg("workers") = 0,
      "Spectral profile for j = 1..depth; depth 0 means the Kruskal rank.");
  mod.def(
      "g_constant",
      [](const DenseArray& a, std::optional<double> budget, unsigned workers) {
        return g_constant(to_matrix(a), scan_options(budget, workers));
      },
      py::arg("a"), py::arg("budget") = py::none(), py::arg("workers") = 0);

  // certify
  py::enum_<BoundKind>(mod, "BoundKind")
      .value("FirstBound", BoundKind::FirstBound)
      .value("LooseSigma", BoundKind::LooseSigma)
      .value("TightGamma", BoundKind::TightGamma)
      .value("NoisyLoose", BoundKind::NoisyLoose)
      .value("NoisyTight", BoundKind::NoisyTight);
  py::class_<Check>(mod, "Check")
      .def_readonly("name", &Check::name)
      .def_readonly("passed", &Check::passed)
      .def_readonly("detail", &Check::detail);
  py::class_<BoundCertificate>(mod, "BoundCertificate")
      .def_readonly("theorem", &BoundCertificate::theorem)
      .def_readonly("ell", &BoundCertificate::ell)
      .def_readonly("alpha", &BoundCertificate::alpha)
      .def_readonly("delta", &BoundCertificate::delta_total)
      .def_readonly("bound", &BoundCertificate::bound)
      .def_readonly("assumptions", &BoundCertificate::assumptions)
      .def_readonly("checks", &BoundCertificate::checks)
      .def_property_readonly("ok", &BoundCertificate::ok)
      .def("value", &BoundCertificate::value)
      .def("certifies_uniqueness", &BoundCertificate::certifies_uniqueness)
      .def("to_json", &BoundCertificate::to_json);

  mod.def("alpha", [](const DenseArray& s, std::size_t ell) { return alpha_for(to_vector(s), ell); },
          py::arg("s_hat"), py::arg("ell"));
  mod.def(
      "first_bound",
      [](const DenseArray& a, const DenseArray& s, std::optional<double> budget, unsigned workers) {
        const Dictionary d(to_matrix(a));
        const ScanOptions opts = scan_options(budget, workers);
        return first_bound(d, gamma_profile(d, 0, opts), to_vector(s), opts);
      },
      py::arg("a"), py::arg("s_hat"), py::arg("budget") = py::none(), py::arg("workers") = 0);
  mod.def(
      "loose_bound",
      [](const SpectralProfile& p, const DenseArray& s, std::size_t ell) {
        return loose_bound(p, to_vector(s), ell);
      },
      py::arg("profile"), py::arg("s_hat"), py::arg("ell"));
  mod.def(
      "tight_bound",
      [](const SpectralProfile& p, const DenseArray& s, std::size_t ell) {
        return tight_bound(p, to_vector(s), ell);
      },
      py::arg("profile"), py::arg("s_hat"), py::arg("ell"));
  mod.def(
      "noisy_loose_bound",
      [](const SpectralProfile& p, const DenseArray& s, std::size_t ell, double eps,
         double delta) { return noisy_loose_bound(p, to_vector(s), ell, {eps, delta}); },
      py::arg("profile"), py::arg("s_hat"), py::arg("ell"), py::arg("epsilon") = 0.0,
      py::arg("delta") = 0.0);
  mod.def(
      "stability_bound",
      [](const SpectralProfile& p, std::size_t ell, double eps, double delta) {
        return stability_bound(p, ell, {eps, delta});
      },
      py::arg("profile"), py::arg("ell"), py::arg("epsilon") = 0.0, py::arg("delta") = 0.0);
  mod.def(
      "noisy_tight_bound",
      [](const DenseArray& a, const DenseArray& s, std::size_t ell, double eps, double delta,
         std::optional<double> budget, unsigned workers) {
        return noisy_tight_bound(Dictionary(to_matrix(a)), to_vector(s), ell, {eps, delta},
                                 scan_options(budget, workers));
      },
      py::arg("a"), py::arg("s_hat"), py::arg("ell"), py::arg("epsilon") = 0.0,
      py::arg("delta") = 0.0, py::arg("budget") = py::none(), py::arg("workers") = 0);
  mod.def("tight_example_theta0_degrees", &tight_example_theta0_degrees);
  mod.def(
      "tight_example",
      [](double theta, double alpha) {
        const TightExample ex = tight_example(theta, alpha);
        py::dict out;
        out["beta"] = ex.beta;
        out["a"] = from_matrix(ex.a);
        out["s0"] = from_vector(ex.s0);
        out["s_hat"] = from_vector(ex.s_hat);
        out["x"] = from_vector(ex.x);
        out["gamma_bar"] = ex.profile.gamma_bar(2);
        out["gamma_bar_closed_form"] = ex.gamma_bar_closed_form;
        out["bound"] = ex.certificate.value();
        out["actual_error"] = ex.actual_error;
        out["all_passed"] = ex.all_passed();
        return out;
      },
      py::arg("theta_degrees"), py::arg("alpha"));

  // random-dict
  mod.def(
      "eta_seq",
      [](std::size_t n, std::size_t m, std::size_t j, double r1, double r2) {
        return eta_seq(RandomDictSpec(n, m), j, r1, r2);
      },
      py::arg("n"), py::arg("m"), py::arg("j"), py::arg("r1") = 0.0, py::arg("r2") = 0.0);
  mod.def(
      "gamma_seq",
      [](std::size_t n, std::size_t m, std::size_t j, double r1, double r2) {
        return gamma_seq(RandomDictSpec(n, m), j, r1, r2);
      },
      py::arg("n"), py::arg("m"), py::arg("j"), py::arg("r1") = 0.0, py::arg("r2") = 0.0);
  mod.def("gamma_analog", &gamma_analog, py::arg("x"), py::arg("p"), py::arg("a"), py::arg("b"));
  py::class_<ProbBoundReport>(mod, "ProbBoundReport")
      .def_readonly("gamma_value", &ProbBoundReport::gamma_value)
      .def_readonly("binom_sum", &ProbBoundReport::binom_sum)
      .def_readonly("log_binom_sum", &ProbBoundReport::log_binom_sum)
      .def_readonly("failure_prob_rhs", &ProbBoundReport::failure_prob_rhs)
      .def_readonly("log_failure_prob_rhs", &ProbBoundReport::log_failure_prob_rhs)
      .def_readonly("log_space", &ProbBoundReport::log_space)
      .def_readonly("vacuous", &ProbBoundReport::vacuous)
      .def_readonly("regime_ok", &ProbBoundReport::regime_ok)
      .def_readonly("regime_margin", &ProbBoundReport::regime_margin);
  mod.def(
      "prob_bound",
      [](std::size_t n, std::size_t m, std::size_t ell, double r1, double r2) {
        return gamma_tail_bound(RandomDictSpec(n, m), ell, r1, r2);
      },
      py::arg("n"), py::arg("m"), py::arg("ell"), py::arg("r1"), py::arg("r2"));
  mod.def("sparsity_supremum", &sparsity_supremum, py::arg("beta"), py::arg("c"));
  mod.def(
      "gaussian_dictionary",
      [](std::size_t n, std::size_t m, std::uint64_t seed, bool normalize) {
        return from_matrix(gaussian_dictionary(n, m, seed, normalize));
      },
      py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("normalize") = false);
  mod.def(
      "szarek_check",
      [](std::size_t n, std::size_t p, double r, std::size_t trials, std::uint64_t seed,
         unsigned workers) {
        const SzarekReport rep = szarek_empirical_check(n, p, r, trials, seed, workers);
        py::dict out;
        out["freq_max"] = rep.freq_max;
        out["freq_min"] = rep.freq_min;
        out["tail_bound"] = rep.tail_bound;
        out["within_bound"] = rep.within_bound();
        return out;
      },
      py::arg("n"), py::arg("p"), py::arg("r"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 0);

  // recover
  mod.def(
      "make_instance",
      [](std::size_t n, std::size_t m, std::size_t p, double eps, std::uint64_t seed,
         bool normalize) {
        const ProblemInstance inst = make_instance(n, m, p, eps, seed, normalize);
        py::dict out;
        out["a"] = from_matrix(inst.dictionary);
        out["s0"] = from_vector(inst.s0);
        out["x"] = from_vector(inst.x);
        out["support"] = inst.support;
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("p"), py::arg("epsilon") = 0.0, py::arg("seed") = 1,
      py::arg("normalize") = true);
  mod.def(
      "min_l2_solve",
      [](const DenseArray& a, const DenseArray& x) {
        return from_vector(min_l2_solve(to_matrix(a), to_vector(x)));
      },
      py::arg("a"), py::arg("x"));
  mod.def(
      "sl0_solve",
      [](const DenseArray& a, const DenseArray& x, double sigma_min, double sigma_decrease,
         int inner_iters, double mu) {
        return from_vector(sl0_solve(to_matrix(a), to_vector(x),
                                     {sigma_min, sigma_decrease, inner_iters, mu}));
      },
      py::arg("a"), py::arg("x"), py::arg("sigma_min") = 1e-3, py::arg("sigma_decrease") = 0.5,
      py::arg("inner_iters") = 3, py::arg("mu") = 2.0);

  mod.def(
      "run_experiment",
      [](std::size_t n, std::size_t m, std::size_t p, std::size_t trials, std::uint64_t seed,
         unsigned workers) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.m = m;
        cfg.p = p;
        cfg.trials = trials;
        cfg.master_seed = seed;
        const ExperimentReport rep = run_experiment(cfg, workers);
        py::dict out;
        out["mean_first_ratio"] = rep.mean_first_ratio;
        out["mean_loose_ratio"] = rep.mean_loose_ratio;
        out["mean_tight_ratio"] = rep.mean_tight_ratio;
        out["ok_trials"] = rep.ok_trials;
        std::ostringstream os;
        write_experiment_csv(os, rep);
        out["csv"] = os.str();
        return out;
      },
      py::arg("n") = 8, py::arg("m") = 12, py::arg("p") = 2, py::arg("trials") = 100,
      py::arg("seed") = 1, py::arg("workers") = 0);
}
