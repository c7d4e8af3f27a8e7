#pragma once

// Internal: run body(i) for i in [0, count) on striped worker threads.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sparsecert::detail {

template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  w = static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(count, 1)));
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned id = 0; id < w; ++id) {
      pool.emplace_back([&, id] {
        try {
          for (std::size_t i = id; i < count; i += w) body(i);
        } catch (...) {
          errors[id] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sparsecert::detail
