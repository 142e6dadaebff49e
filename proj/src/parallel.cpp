#include "convtail/parallel.hpp"

#include <cstdlib>

namespace convtail {

int thread_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("CONVTAIL_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
      if (v < 0) return 1;
      // 0 = auto, fall through
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return budget;
}

}  // namespace convtail
