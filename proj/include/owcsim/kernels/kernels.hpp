#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the simulator with scalar reference
// implementations and AVX2 variants selected at runtime. The scalar versions
// are the semantic ground truth; the vector versions are equivalence-tested
// against them (bitwise for the integer kernel, 1e-12 relative for the
// transcendental one).
namespace owc::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();

// Force a backend (used by tests and the OWCSIM_KERNEL=scalar|avx2 env
// override). Forcing avx2 on a CPU without it falls back to scalar.
void force_backend(Backend b);
void reset_backend();

// Sum of Gaussian-beam gain terms over an element/photodiode batch:
//   sum_i  weight[i] * exp(-2 * radial_sq[i] / w2_i) / w2_i
// with the squared beam radius at the i-th axial distance
//   w2_i = waist_sq * (1 + ((axial[i] - waist_offset) * inv_rayleigh)^2).
// weight[i] carries the incidence cosine, concentrator factors and the
// field-of-view indicator (0 when out of view).
double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh);

// Hard-decision bit errors for Gray-mapped square QAM. re/im are received
// symbols pre-scaled so constellation points sit on odd integers
// {-(L-1), ..., L-1}; ref holds per-symbol reference Gray labels packed as
// (gray_i << 8) | gray_q. side is L = sqrt(F). Returns total bit errors.
std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side);

namespace scalar {
double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh);
std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side);
}  // namespace scalar

#if defined(OWCSIM_HAVE_AVX2)
namespace avx2 {
double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh);
std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side);
}  // namespace avx2
#endif

}  // namespace owc::kernels
