#pragma once

#include <vector>

#include "owcsim/vec3.hpp"

namespace owc {

// Gaussian-beam source parameters of a single VCSEL emitter.
struct VcselParams {
  double beam_waist_w0 = 5e-6;       // m
  double wavelength_lambda = 1550e-9;  // m
  double medium_index_n = 1.0;
  double emit_power_pout = 50e-3;    // W

  void validate() const;
};

struct LensParams {
  double focal_length_f = 2e-3;   // m
  double vcsel_to_lens_d1 = 8e-3;  // m

  void validate() const;
};

// Post-lens beam geometry. The waist sits waist_location_d2 behind the lens;
// downstream radii follow new_waist_wd and the transformed Rayleigh range.
struct TransformedBeam {
  double new_waist_wd = 0.0;       // m
  double waist_location_d2 = 0.0;  // m
  double divergence_theta2 = 0.0;  // rad
  double magnification_k = 0.0;
  double rayleigh_range = 0.0;     // m, of the transformed beam

  // Beam radius at axial distance z from the lens plane.
  double radius_at(double z) const;
};

struct EyeSafetyParams {
  double mpe = 1300.0;           // W/m^2
  double pupil_radius_rp = 3.5e-3;  // m
  double mhp_distance = 0.0;     // m, most hazardous position along the axis

  void validate() const;
};

// z_R = pi w0^2 n / lambda
double rayleigh_range(const VcselParams& v);

// w(z) = w0 sqrt(1 + (z/z_R)^2)
double beam_radius(double w0, double z, double z_r);

// Thin-lens transformation of the Gaussian beam. Throws DegenerateLens when
// the waist-location denominator underflows (|den| < 1e-30).
TransformedBeam lens_transform(const VcselParams& v, const LensParams& l);

// Power enclosed within radius r0 where the beam radius is w_at_z.
double enclosed_power(double pout, double r0, double w_at_z);

// Maximum per-VCSEL power that keeps the pupil-plane exposure at the MPE:
// (1/eta) * MPE * pi * rp^2 with eta the enclosed-power fraction at the MHP.
// Throws EtaUnderflow when eta < 1e-12.
double eye_safe_power(const EyeSafetyParams& e, const VcselParams& v);

}  // namespace owc
