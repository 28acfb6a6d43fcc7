#include "rldp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rldp {

unsigned default_workers() {
  if (const char* env = std::getenv("RENEWAL_LDP_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rldp
