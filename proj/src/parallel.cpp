#include "soliton_lab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace sl {

namespace {

std::atomic<int> requested{0};

int env_limit()
{
    const char* v = std::getenv("SOLITON_LAB_THREADS");
    if (!v)
        return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (...) {
        return 0;
    }
}

}

void set_thread_limit(int n) { requested = std::max(0, n); }

int thread_limit()
{
    int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    int cap = env_limit();
    int n = requested.load();
    if (n == 0)
        n = cap > 0 ? cap : hw;
    else if (cap > 0)
        n = std::min(n, cap);
    return std::max(1, n);
}

}
