#include "nimbus/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace nimbus::kernels {
namespace {

std::atomic<int> g_backend{-1};  // -1 = unresolved

Backend resolve() {
  if (const char* env = std::getenv("NIMBUS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::Avx2;
    // "auto" or anything unrecognized falls through to detection
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  int b = g_backend.load(std::memory_order_acquire);
  if (b < 0) {
    b = static_cast<int>(resolve());
    g_backend.store(b, std::memory_order_release);
  }
  return static_cast<Backend>(b);
}

void set_backend(Backend b) {
  g_backend.store(static_cast<int>(b), std::memory_order_release);
}

const KernelTable& active() {
  return active_backend() == Backend::Avx2 ? avx2_table() : scalar_table();
}

std::string backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace nimbus::kernels
