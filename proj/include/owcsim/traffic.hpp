#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owcsim/rng.hpp"
#include "owcsim/vec3.hpp"

namespace owc {

// A demand class: its QoS floor, session statistics and power range.
struct ServiceClass {
  int id = 0;
  std::string name;
  double min_rate = 1e8;        // bit/s
  double mean_session = 120.0;  // s
  double shape_omega = 1.0;     // >= 1; hyper-exponential mixture shape
  double arrival_rate = 0.05;   // users/s at load multiplier 1
  double p_min = 1e-3;          // W
  double p_max = 0.3;           // W

  void validate() const;
};

struct MobilityConfig {
  Vec3 room_dims{5.0, 5.0, 3.0};
  double rx_height = 1.0;     // m; ceiling minus vertical separation
  double speed_min = 0.05;    // m/s
  double speed_max = 0.3;     // m/s
  double pause_min = 15.0;    // s
  double pause_max = 45.0;    // s
  double mean_residence = 120.0;  // s, per (AP, class) exponential

  void validate() const;
};

struct UserState {
  std::uint64_t id = 0;
  int class_id = 0;
  Vec3 position;
  Vec2 waypoint;
  double speed = 0.0;              // m/s; 0 while paused
  double pause_remaining = 0.0;    // s
  double session_remaining = 0.0;  // s
  double residence_remaining = 0.0;  // s
  std::optional<int> serving_ap;
  double allocated_power = 0.0;  // W
  bool qos_missed = false;
};

// Two-stage hyper-exponential session draw: with probability w/(w+1) the
// short component (mean Td/w), otherwise the long one (mean w*Td). omega = 1
// collapses to a plain exponential.
double sample_session_duration(const ServiceClass& c, Rng& rng);

// Density of the class holding time min(session, residence): a two-term
// exponential mixture with rates 1/Tr + w/Td and 1/Tr + 1/(w Td).
double holding_time_pdf(double t, double tr, double td, double omega);
double holding_time_cdf(double t, double tr, double td, double omega);

// Mean of the holding-time mixture.
double mean_holding_time(double tr, double td, double omega);

// Poisson arrivals over `duration`: uniform positions at rx height, fresh
// session and residence clocks, a first waypoint and speed.
std::vector<UserState> spawn_arrivals(const ServiceClass& c, double duration,
                                      const MobilityConfig& m, Rng& rng,
                                      std::uint64_t& next_id,
                                      double rate_scale = 1.0);

// Random-waypoint motion at rx height plus clock bookkeeping. Users whose
// session or residence clock expires are removed (departure = min rule).
void advance(std::vector<UserState>& users, double dt, const MobilityConfig& m,
             Rng& rng);

}  // namespace owc
