#include "pulsefield/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pulsefield {

unsigned worker_count() {
  if (const char* env = std::getenv("PULSEFIELD_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && requested > 0) return static_cast<unsigned>(requested);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(Index count, Index chunk, const std::function<void(Index, Index)>& body) {
  if (count <= 0) return;
  chunk = std::max<Index>(chunk, 1);
  const Index chunks = (count + chunk - 1) / chunk;
  const auto workers = static_cast<Index>(std::min<Index>(worker_count(), chunks));
  if (workers <= 1) {
    for (Index begin = 0; begin < count; begin += chunk) body(begin, std::min(count, begin + chunk));
    return;
  }

  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (Index c = next++; c < chunks; c = next++) {
      try {
        body(c * chunk, std::min(count, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (Index w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pulsefield
