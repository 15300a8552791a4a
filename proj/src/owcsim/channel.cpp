#include "owcsim/channel.hpp"

#include <cmath>

#include "owcsim/errors.hpp"
#include "owcsim/kernels/kernels.hpp"

namespace owc {

std::vector<Vec2> make_element_grid(int side, double pitch) {
  std::vector<Vec2> out;
  out.reserve(std::size_t(side) * side);
  const double half = 0.5 * (side - 1);
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix) {
      out.push_back({(ix - half) * pitch, (iy - half) * pitch});
    }
  }
  return out;
}

std::vector<Vec3> make_pd_orientations(int count, double tilt_rad) {
  std::vector<Vec3> out;
  out.reserve(std::size_t(count));
  out.push_back({0.0, 0.0, 1.0});
  const double st = std::sin(tilt_rad);
  const double ct = std::cos(tilt_rad);
  for (int i = 1; i < count; ++i) {
    const double az = 2.0 * M_PI * (i - 1) / (count - 1);
    out.push_back({st * std::cos(az), st * std::sin(az), ct});
  }
  return out;
}

namespace {

struct ElementGeom {
  double radial_sq;  // (d sin(phi))^2, lateral offset from the beam axis
  double axial;      // d cos(phi), distance along the beam axis
  double cos_psi;    // incidence cosine at the photodiode, clamped at 0
};

// Geometry of the (element, photodiode) link. Beams point straight down, so
// the axial distance is the height drop and the radial offset is lateral.
inline ElementGeom link_geometry(const ApGeometry& ap, int element_index,
                                 const ReceiverGeometry& rx, int pd_index) {
  const Vec2 off = ap.element_offsets[std::size_t(element_index)];
  const Vec3 src{ap.position.x + off.x, ap.position.y + off.y, ap.position.z};
  const Vec3 v = rx.position - src;  // source -> receiver, z < 0
  ElementGeom g;
  g.radial_sq = v.x * v.x + v.y * v.y;
  g.axial = std::abs(v.z);
  const double d = v.norm();
  if (d <= 0.0) {
    g.cos_psi = 0.0;
    return g;
  }
  const Vec3 to_src = v * (-1.0 / d);
  g.cos_psi = to_src.dot(rx.pd_orientations[std::size_t(pd_index)]);
  if (g.cos_psi < 0.0) g.cos_psi = 0.0;
  return g;
}

}  // namespace

double element_channel_gain(const ApGeometry& ap, int element_index,
                            const ReceiverGeometry& rx, int pd_index,
                            const TransformedBeam& beam) {
  const ElementGeom g = link_geometry(ap, element_index, rx, pd_index);
  const double cos_acc = std::cos(rx.acceptance_angle);
  if (g.cos_psi < cos_acc) return 0.0;  // out of the CPC field of view
  const double w = beam.radius_at(g.axial);
  const double w2 = w * w;
  const double prefactor = 2.0 * rx.pd_count() * rx.active_area_fraction *
                           rx.concentrator_gain / M_PI;
  return prefactor * std::exp(-2.0 * g.radial_sq / w2) / w2 * g.cos_psi;
}

double aggregate_gain(const ApGeometry& ap, const ReceiverGeometry& rx,
                      const TransformedBeam& beam) {
  const int elems = ap.element_count();
  const int pds = rx.pd_count();
  const std::size_t n = std::size_t(elems) * pds;
  // Stack buffers cover the default 5x5 array with a 5-PD receiver.
  constexpr std::size_t kStatic = 256;
  double sbuf[3 * kStatic];
  std::vector<double> heap;
  double* radial_sq;
  if (n <= kStatic) {
    radial_sq = sbuf;
  } else {
    heap.resize(3 * n);
    radial_sq = heap.data();
  }
  double* axial = radial_sq + n;
  double* weight = axial + n;

  const double cos_acc = std::cos(rx.acceptance_angle);
  const double prefactor = 2.0 * pds * rx.active_area_fraction *
                           rx.concentrator_gain / M_PI;
  std::size_t idx = 0;
  for (int pd = 0; pd < pds; ++pd) {
    for (int e = 0; e < elems; ++e, ++idx) {
      const ElementGeom g = link_geometry(ap, e, rx, pd);
      radial_sq[idx] = g.radial_sq;
      axial[idx] = g.axial;
      weight[idx] = g.cos_psi < cos_acc ? 0.0 : prefactor * g.cos_psi;
    }
  }
  const double wd2 = beam.new_waist_wd * beam.new_waist_wd;
  return kernels::gaussian_gain_sum(radial_sq, axial, weight, n, wd2,
                                    beam.waist_location_d2,
                                    1.0 / beam.rayleigh_range);
}

}  // namespace owc
