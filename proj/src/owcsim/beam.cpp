#include "owcsim/beam.hpp"

#include <cmath>

#include "owcsim/errors.hpp"

namespace owc {

void VcselParams::validate() const {
  if (beam_waist_w0 <= 0.0 || wavelength_lambda <= 0.0 ||
      medium_index_n <= 0.0 || emit_power_pout <= 0.0) {
    throw Error(ErrorCode::config_invalid,
                "VcselParams: all fields must be strictly positive");
  }
}

void LensParams::validate() const {
  if (focal_length_f <= 0.0) {
    throw Error(ErrorCode::config_invalid, "LensParams: focal length must be > 0");
  }
  if (vcsel_to_lens_d1 < 0.0) {
    throw Error(ErrorCode::config_invalid, "LensParams: d1 must be >= 0");
  }
}

void EyeSafetyParams::validate() const {
  if (mpe <= 0.0 || pupil_radius_rp <= 0.0 || mhp_distance <= 0.0) {
    throw Error(ErrorCode::config_invalid,
                "EyeSafetyParams: all fields must be positive");
  }
  if (pupil_radius_rp < 1e-3 || pupil_radius_rp > 7e-3) {
    throw Error(ErrorCode::config_invalid,
                "EyeSafetyParams: pupil radius outside [1, 7] mm");
  }
}

double rayleigh_range(const VcselParams& v) {
  return M_PI * v.beam_waist_w0 * v.beam_waist_w0 * v.medium_index_n /
         v.wavelength_lambda;
}

double beam_radius(double w0, double z, double z_r) {
  const double u = z / z_r;
  return w0 * std::sqrt(1.0 + u * u);
}

double TransformedBeam::radius_at(double z) const {
  const double u = (z - waist_location_d2) / rayleigh_range;
  return new_waist_wd * std::sqrt(1.0 + u * u);
}

TransformedBeam lens_transform(const VcselParams& v, const LensParams& l) {
  v.validate();
  l.validate();
  const double f = l.focal_length_f;
  const double d1 = l.vcsel_to_lens_d1;
  const double w0 = v.beam_waist_w0;
  const double lambda = v.wavelength_lambda;
  const double a = lambda / (M_PI * w0 * w0);  // inverse Rayleigh range

  const double den = 1.0 / (f * f) + (1.0 - d1 / f) * (1.0 - d1 / f) * a * a;
  if (std::abs(den) < 1e-30) {
    throw Error(ErrorCode::degenerate_lens,
                "lens_transform: waist-location denominator underflow");
  }
  const double d2 = (1.0 / f - (1.0 - d1 / f) * d1 * a * a) / den;

  // Correction term uses d1; the q-parameter propagation oracle pins this
  // form (with d2 the expression is not the transformed waist).
  const double g = 1.0 - d1 / f;
  const double wd =
      lambda * f /
      (M_PI * w0 * std::sqrt(1.0 + g * g * a * a * f * f));

  TransformedBeam out;
  out.new_waist_wd = wd;
  out.waist_location_d2 = d2;
  out.magnification_k = wd / w0;
  const double theta = lambda / (M_PI * w0);  // fundamental-mode divergence
  out.divergence_theta2 = theta / out.magnification_k;
  out.rayleigh_range = M_PI * wd * wd / lambda;
  return out;
}

double enclosed_power(double pout, double r0, double w_at_z) {
  return pout * (1.0 - std::exp(-2.0 * r0 * r0 / (w_at_z * w_at_z)));
}

double eye_safe_power(const EyeSafetyParams& e, const VcselParams& v) {
  e.validate();
  v.validate();
  const double w_mhp =
      beam_radius(v.beam_waist_w0, e.mhp_distance, rayleigh_range(v));
  const double eta = 1.0 - std::exp(-2.0 * e.pupil_radius_rp *
                                    e.pupil_radius_rp / (w_mhp * w_mhp));
  if (eta < 1e-12) {
    throw Error(ErrorCode::eta_underflow,
                "eye_safe_power: enclosure factor underflow at the MHP");
  }
  return (1.0 / eta) * e.mpe * M_PI * e.pupil_radius_rp * e.pupil_radius_rp;
}

}  // namespace owc
