#pragma once

// Internal: deterministic parallel reduction over the j-subsets of m columns.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "sparsecert/matops.hpp"

namespace sparsecert::detail {

inline unsigned resolve_workers(unsigned requested, double count) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  // Not worth a thread per handful of subsets.
  const double per_worker = 64.0;
  const auto cap = static_cast<unsigned>(std::max(1.0, count / per_worker));
  return std::clamp(w, 1u, std::min(cap, 64u));
}

/// Tracks the best value seen, breaking ties by the smaller lexicographic rank.
template <class Better>
struct Extreme {
  bool set = false;
  double value = 0.0;
  std::uint64_t rank = 0;
  std::vector<std::size_t> indices;

  void offer(double v, std::uint64_t r, const std::vector<std::size_t>& idx) {
    if (!set || Better{}(v, value) || (v == value && r < rank)) {
      set = true;
      value = v;
      rank = r;
      indices = idx;
    }
  }
  void merge(const Extreme& o) {
    if (o.set) offer(o.value, o.rank, o.indices);
  }
};

using MinTracker = Extreme<std::less<>>;
using MaxTracker = Extreme<std::greater<>>;

/// Runs `visit(acc, rank, indices)` over every j-subset, striding subsets
/// across workers by rank, then folds the per-worker accumulators in worker
/// order with `Acc::merge`. Accumulators must give the same answer for any
/// partition (rank-based tie-breaking does this).
template <class Acc, class Visit>
Acc scan_subsets(std::size_t cols, std::size_t j, double budget, unsigned workers,
                 Visit visit) {
  SubsetEnumerator probe(cols, j, budget);
  const unsigned w = resolve_workers(workers, probe.count());
  std::vector<Acc> accs(w);
  auto run = [&](unsigned id) {
    SubsetEnumerator it(cols, j, budget);
    do {
      if (it.rank() % w == id) visit(accs[id], it.rank(), it.current());
    } while (it.advance());
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::exception_ptr> errors(w);
    {
      std::vector<std::jthread> pool;
      pool.reserve(w);
      for (unsigned id = 0; id < w; ++id) {
        pool.emplace_back([&, id] {
          try {
            run(id);
          } catch (...) {
            errors[id] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  Acc out = std::move(accs[0]);
  for (unsigned id = 1; id < w; ++id) out.merge(accs[id]);
  return out;
}

}  // namespace sparsecert::detail
