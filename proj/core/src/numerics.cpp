#include "coulomb/numerics.hpp"

#include <atomic>

namespace coulomb {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned threads) { g_threads = threads == 0 ? 1 : threads; }

unsigned thread_count() { return g_threads; }

}  // namespace coulomb
