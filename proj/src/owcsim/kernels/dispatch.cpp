#include <atomic>
#include <cstdlib>
#include <cstring>

#include "owcsim/kernels/kernels.hpp"

namespace owc::kernels {
namespace {

Backend detect() {
#if defined(OWCSIM_HAVE_AVX2)
  const char* env = std::getenv("OWCSIM_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() {
#if defined(OWCSIM_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
  g_backend.store(b, std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(detect(), std::memory_order_relaxed); }

double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh) {
#if defined(OWCSIM_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return avx2::gaussian_gain_sum(radial_sq, axial, weight, n, waist_sq,
                                   waist_offset, inv_rayleigh);
  }
#endif
  return scalar::gaussian_gain_sum(radial_sq, axial, weight, n, waist_sq,
                                   waist_offset, inv_rayleigh);
}

std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side) {
#if defined(OWCSIM_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return avx2::qam_error_count(re, im, ref, n, side);
  }
#endif
  return scalar::qam_error_count(re, im, ref, n, side);
}

}  // namespace owc::kernels
