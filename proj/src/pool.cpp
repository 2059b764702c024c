#include "markoff/pool.hpp"

#include <cstdlib>
#include <string>

namespace markoff {

unsigned resolve_workers(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("MARKOFF_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace markoff
