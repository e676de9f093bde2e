#include "instanton/parallel.hpp"

#include <cstdlib>
#include <string>

namespace instanton {

unsigned max_threads() {
  if (const char* env = std::getenv("INSTANTON_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace instanton
