#include "slspec/parallel.hpp"

#include <cstdlib>
#include <string>

namespace slspec {

int default_jobs() {
  if (const char* env = std::getenv("SLSPEC_JOBS")) {
    try {
      int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (...) {
    }
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace slspec
