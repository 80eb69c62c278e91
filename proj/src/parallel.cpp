#include "triharm/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace triharm {

int thread_cap() {
  if (const char* env = std::getenv("TRIHARM_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 0;
}

int effective_threads(int requested) {
  int width = requested > 0 ? requested : std::max(1, int(std::thread::hardware_concurrency()));
  const int cap = thread_cap();
  return cap > 0 ? std::min(width, cap) : width;
}

}  // namespace triharm
