#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sparsecert {

/// Identifier written into every randomized report.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64/box-muller";

/// SplitMix64 finalizer; maps (seed, stream) pairs to well-separated seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the independent stream for trial `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Bit-reproducible sampler. Only the engine is taken from <random>; the
/// distributions are implemented here because the standard ones are not
/// specified bit-for-bit across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on {0, ..., bound - 1}; bound >= 1.
  std::uint64_t index(std::uint64_t bound);
  /// Standard normal by Box-Muller; both outputs of each pair are used.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sparsecert
