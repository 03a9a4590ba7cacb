#include "nqac/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nqac {

int default_jobs() {
    if (const char* env = std::getenv("NQAC_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

}  // namespace nqac
