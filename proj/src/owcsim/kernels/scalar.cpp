#include <cmath>

#include "owcsim/kernels/kernels.hpp"

namespace owc::kernels::scalar {

double gaussian_gain_sum(const double* radial_sq, const double* axial,
                         const double* weight, std::size_t n, double waist_sq,
                         double waist_offset, double inv_rayleigh) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (axial[i] - waist_offset) * inv_rayleigh;
    const double w2 = waist_sq * (1.0 + u * u);
    acc += weight[i] * std::exp(-2.0 * radial_sq[i] / w2) / w2;
  }
  return acc;
}

std::uint64_t qam_error_count(const double* re, const double* im,
                              const std::uint16_t* ref, std::size_t n,
                              int side) {
  const int max_idx = side - 1;
  const double hi = double(max_idx);
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Symbols sit on odd integers; index = (level + side - 1) / 2, clamped
    // in the double domain so the AVX2 variant matches bit for bit.
    double vi = (re[i] + hi) * 0.5;
    double vq = (im[i] + hi) * 0.5;
    vi = vi < 0.0 ? 0.0 : (vi > hi ? hi : vi);
    vq = vq < 0.0 ? 0.0 : (vq > hi ? hi : vq);
    const int ii = int(std::lrint(vi));
    const int qi = int(std::lrint(vq));
    const unsigned gray = unsigned(((ii ^ (ii >> 1)) << 8) | (qi ^ (qi >> 1)));
    errors += std::uint64_t(__builtin_popcount(gray ^ ref[i]));
  }
  return errors;
}

}  // namespace owc::kernels::scalar
