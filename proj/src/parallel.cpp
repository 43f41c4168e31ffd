#include "corrdet/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace corrdet {

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (workers == 0) workers = default_workers();
  const std::size_t chunks = std::min<std::size_t>(workers, count);
  if (chunks == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> threads;
    threads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t lo = count * c / chunks;
      const std::size_t hi = count * (c + 1) / chunks;
      threads.emplace_back([&, c, lo, hi] {
        try {
          for (std::size_t k = lo; k < hi; ++k) fn(k);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace corrdet
