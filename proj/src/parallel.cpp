#include "sgla/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace sgla::parallel {
namespace {

std::atomic<int> g_threads{0};
std::atomic<bool> g_serial{false};

int env_threads() {
  const char* v = std::getenv("MVAG_THREADS");
  if (v == nullptr) return 0;
  try {
    return std::max(0, std::stoi(v));
  } catch (...) {
    return 0;
  }
}

}  // namespace

int thread_count() {
  if (g_serial.load()) return 1;
  int t = g_threads.load();
  if (t < 1) t = env_threads();
  if (t < 1) t = omp_get_max_threads();
  return std::max(1, t);
}

void set_thread_count(int threads) { g_threads.store(threads < 1 ? 0 : threads); }

void set_serial(bool serial) { g_serial.store(serial); }

bool serial() { return g_serial.load() || thread_count() == 1; }

}  // namespace sgla::parallel
