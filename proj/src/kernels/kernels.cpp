#include "kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace facekit::kernels {
namespace {

Backend detect_default() {
  const char* env = std::getenv("FACEKIT_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{detect_default()};
  return slot;
}

}  // namespace

bool avx2_supported() {
#if FACEKIT_BUILD_AVX2 && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

const KernelTable& table() {
#if FACEKIT_BUILD_AVX2
  if (active_backend() == Backend::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

}  // namespace facekit::kernels
