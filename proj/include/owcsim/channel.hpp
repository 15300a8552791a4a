#pragma once

#include <vector>

#include "owcsim/beam.hpp"
#include "owcsim/vec3.hpp"

namespace owc {

// Ceiling-mounted VCSEL-array access point. Beams point straight down; each
// array element sits on a uniform lateral grid around the AP position.
struct ApGeometry {
  Vec3 position;              // m, on the ceiling
  int array_side_lc = 5;      // Lc x Lc elements
  double per_vcsel_power = 50e-3;  // W
  std::vector<Vec2> element_offsets;  // m, lateral, size Lc*Lc

  int element_count() const { return array_side_lc * array_side_lc; }
  double total_power() const { return element_count() * per_vcsel_power; }
};

// Angle-diversity receiver: n photodiodes with distinct orientations, each
// behind a CPC with gain G inside the acceptance angle.
struct ReceiverGeometry {
  Vec3 position;  // m
  std::vector<Vec3> pd_orientations;  // unit normals
  double active_area_fraction = 0.8;
  double concentrator_gain = 12.5;
  double acceptance_angle = 0.5235987755982988;  // rad (30 deg)
  double responsivity = 0.7;                     // A/W

  int pd_count() const { return int(pd_orientations.size()); }
};

// Lc x Lc element offsets on a centered square grid with the given pitch.
std::vector<Vec2> make_element_grid(int side, double pitch);

// One zenith-pointing photodiode plus (count-1) tilted ones at uniform
// azimuths; the standard angle-diversity layout.
std::vector<Vec3> make_pd_orientations(int count, double tilt_rad);

// DC gain between one array element and one photodiode. Exactly zero when
// the incidence angle exceeds the acceptance angle.
double element_channel_gain(const ApGeometry& ap, int element_index,
                            const ReceiverGeometry& rx, int pd_index,
                            const TransformedBeam& beam);

// Sum of element_channel_gain over every (photodiode, element) pair. Runs on
// the dispatched kernel; identical to the brute-force double loop under the
// scalar backend.
double aggregate_gain(const ApGeometry& ap, const ReceiverGeometry& rx,
                      const TransformedBeam& beam);

}  // namespace owc
