#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "sparsecert/error.hpp"
#include "sparsecert/recover.hpp"
#include "sparsecert/rng.hpp"

using namespace sparsecert;

TEST_CASE("instances are reproducible and well formed") {
  const ProblemInstance a = make_instance(8, 12, 2, 0.0, 99, true);
  const ProblemInstance b = make_instance(8, 12, 2, 0.0, 99, true);
  CHECK(a.dictionary == b.dictionary);
  CHECK(a.s0 == b.s0);
  CHECK(a.support.size() == 2);
  CHECK(a.support[0] < a.support[1]);
  CHECK(std::count_if(a.s0.begin(), a.s0.end(), [](double v) { return v != 0.0; }) == 2);
  CHECK(norm2(subtract(a.dictionary.apply(a.s0), a.x)) < 1e-14);
  for (std::size_t c = 0; c < 12; ++c) CHECK(a.dictionary.column_norm(c) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_instance(8, 12, 13, 0.0, 1, true), InvalidInputError);
}

TEST_CASE("noise is placed at exactly epsilon") {
  const ProblemInstance a = make_instance(6, 10, 2, 0.05, 4, false);
  CHECK(norm2(subtract(a.x, a.dictionary.apply(a.s0))) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("minimum-norm solve") {
  const Matrix orth = Matrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}});
  const Vector x = {0.3, -2.0};
  CHECK(min_l2_solve(orth, x) == Vector{0.3, 0.0, -2.0});
  CHECK(min_l2_solve(orth, Vector{0.0, 0.0}) == Vector{0.0, 0.0, 0.0});

  const ProblemInstance inst = make_instance(8, 12, 3, 0.0, 12, false);
  const Vector s = min_l2_solve(inst.dictionary, inst.x);
  CHECK(norm2(subtract(inst.dictionary.apply(s), inst.x)) < 1e-10 * norm2(inst.x));
  // Any feasible point is s + (null-space vector), which can only be longer.
  MinNormProjector proj(inst.dictionary);
  Rng rng(1);
  const Vector zero(inst.x.size(), 0.0);
  for (int t = 0; t < 100; ++t) {
    Vector z(12);
    for (double& v : z) v = rng.normal();
    const Vector nz = proj.project(z, zero);
    Vector other(12);
    for (std::size_t i = 0; i < 12; ++i) other[i] = s[i] + nz[i];
    CHECK(norm2(other) >= norm2(s) - 1e-12);
  }
}

TEST_CASE("rank-deficient dictionaries are refused") {
  const Matrix a = Matrix::from_rows({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}});
  CHECK_THROWS_AS(min_l2_solve(a, Vector{1.0, 2.0}), SingularityError);
  CHECK_THROWS_AS(sl0_solve(a, Vector{1.0, 2.0}), SingularityError);
}

TEST_CASE("SL0 recovers sparse vectors and stays feasible") {
  int ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const ProblemInstance inst = make_instance(8, 12, 2, 0.0, derive_seed(2024, t), true);
    const Vector s = sl0_solve(inst.dictionary, inst.x, {.sigma_min = 1e-3});
    CHECK(norm2(subtract(inst.dictionary.apply(s), inst.x)) <= 1e-10 * norm2(inst.x));
    ok += norm2(subtract(s, inst.s0)) < 1e-3;
  }
  CHECK(ok >= 95);
}

TEST_CASE("SL0 on zero data returns zero") {
  const ProblemInstance inst = make_instance(4, 7, 1, 0.0, 3, true);
  const Vector s = sl0_solve(inst.dictionary, Vector(4, 0.0));
  CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("SL0 commutes with column permutations") {
  const ProblemInstance inst = make_instance(5, 8, 2, 0.0, 8, true);
  const std::vector<std::size_t> perm = {3, 0, 7, 1, 6, 2, 5, 4};
  Matrix pa(5, 8);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 8; ++c) pa(r, c) = inst.dictionary(r, perm[c]);
  const Vector s = sl0_solve(inst.dictionary, inst.x, {.sigma_min = 1e-3});
  const Vector ps = sl0_solve(pa, inst.x, {.sigma_min = 1e-3});
  for (std::size_t c = 0; c < 8; ++c) CHECK(ps[c] == doctest::Approx(s[perm[c]]).epsilon(1e-9));
}

TEST_CASE("coarse sigma leaves an approximately sparse estimate") {
  const ProblemInstance inst = make_instance(8, 12, 2, 0.0, 31, true);
  const Vector s = sl0_solve(inst.dictionary, inst.x, {.sigma_min = 0.1});
  Vector mags(s.size());
  std::transform(s.begin(), s.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::sort(mags.rbegin(), mags.rend());
  CHECK(mags[2] > 0.0);
  CHECK(mags[2] < mags[1]);
}

TEST_CASE("instance files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "sparsecert_instance_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "inst").string();
  const ProblemInstance inst = make_instance(4, 6, 2, 0.01, 77, true);
  write_instance(prefix, inst);
  const ProblemInstance back = read_instance(prefix);
  CHECK(back.dictionary == inst.dictionary);
  CHECK(back.x == inst.x);
  CHECK(back.s0 == inst.s0);
  CHECK(back.support == inst.support);
  CHECK(back.seed == 77);
  CHECK(back.noise_norm == 0.01);
  CHECK(sl0_solver()(inst.dictionary, inst.x).size() == 6);
}
