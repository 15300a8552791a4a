#include "owcsim/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "owcsim/errors.hpp"

namespace owc {

void ServiceClass::validate() const {
  if (shape_omega < 1.0) {
    throw Error(ErrorCode::config_invalid, "ServiceClass: omega must be >= 1");
  }
  if (min_rate <= 0.0 || mean_session <= 0.0 || arrival_rate < 0.0) {
    throw Error(ErrorCode::config_invalid,
                "ServiceClass: rates and durations must be positive");
  }
  if (p_min > p_max || p_min < 0.0) {
    throw Error(ErrorCode::config_invalid, "ServiceClass: bad power range");
  }
}

void MobilityConfig::validate() const {
  if (room_dims.x <= 0.0 || room_dims.y <= 0.0 || room_dims.z <= 0.0) {
    throw Error(ErrorCode::config_invalid, "MobilityConfig: bad room dims");
  }
  if (rx_height <= 0.0 || rx_height >= room_dims.z) {
    throw Error(ErrorCode::config_invalid,
                "MobilityConfig: rx height outside the room");
  }
  if (speed_min < 0.0 || speed_max < speed_min || pause_min < 0.0 ||
      pause_max < pause_min || mean_residence <= 0.0) {
    throw Error(ErrorCode::config_invalid, "MobilityConfig: bad ranges");
  }
}

double sample_session_duration(const ServiceClass& c, Rng& rng) {
  const double w = c.shape_omega;
  if (rng.uniform() < w / (w + 1.0)) {
    return rng.exponential(c.mean_session / w);
  }
  return rng.exponential(w * c.mean_session);
}

namespace {

struct Mixture {
  double w1, w2;  // weights
  double r1, r2;  // rates
};

inline Mixture holding_mixture(double tr, double td, double omega) {
  return {omega / (omega + 1.0), 1.0 / (omega + 1.0),
          1.0 / tr + omega / td, 1.0 / tr + 1.0 / (omega * td)};
}

}  // namespace

double holding_time_pdf(double t, double tr, double td, double omega) {
  if (t < 0.0) return 0.0;
  const Mixture m = holding_mixture(tr, td, omega);
  return m.w1 * m.r1 * std::exp(-m.r1 * t) + m.w2 * m.r2 * std::exp(-m.r2 * t);
}

double holding_time_cdf(double t, double tr, double td, double omega) {
  if (t <= 0.0) return 0.0;
  const Mixture m = holding_mixture(tr, td, omega);
  return 1.0 - m.w1 * std::exp(-m.r1 * t) - m.w2 * std::exp(-m.r2 * t);
}

double mean_holding_time(double tr, double td, double omega) {
  const Mixture m = holding_mixture(tr, td, omega);
  return m.w1 / m.r1 + m.w2 / m.r2;
}

namespace {

inline void assign_new_leg(UserState& u, const MobilityConfig& m, Rng& rng) {
  u.waypoint = {rng.uniform(0.0, m.room_dims.x), rng.uniform(0.0, m.room_dims.y)};
  u.speed = rng.uniform(m.speed_min, m.speed_max);
}

}  // namespace

std::vector<UserState> spawn_arrivals(const ServiceClass& c, double duration,
                                      const MobilityConfig& m, Rng& rng,
                                      std::uint64_t& next_id,
                                      double rate_scale) {
  std::vector<UserState> out;
  const double rate = c.arrival_rate * rate_scale;
  if (rate <= 0.0 || duration <= 0.0) return out;
  // Exponential inter-arrival gaps give the Poisson count directly.
  double t = rng.exponential(1.0 / rate);
  while (t <= duration) {
    UserState u;
    u.id = next_id++;
    u.class_id = c.id;
    u.position = {rng.uniform(0.0, m.room_dims.x),
                  rng.uniform(0.0, m.room_dims.y), m.rx_height};
    u.session_remaining = sample_session_duration(c, rng);
    u.residence_remaining = rng.exponential(m.mean_residence);
    assign_new_leg(u, m, rng);
    out.push_back(u);
    t += rng.exponential(1.0 / rate);
  }
  return out;
}

void advance(std::vector<UserState>& users, double dt, const MobilityConfig& m,
             Rng& rng) {
  if (dt <= 0.0) {
    throw Error(ErrorCode::config_invalid, "advance: dt must be > 0");
  }
  for (auto& u : users) {
    u.session_remaining -= dt;
    u.residence_remaining -= dt;
    if (u.session_remaining < 0.0 || u.residence_remaining < 0.0) continue;

    double remaining = dt;
    while (remaining > 0.0) {
      if (u.pause_remaining > 0.0) {
        const double hold = std::min(u.pause_remaining, remaining);
        u.pause_remaining -= hold;
        remaining -= hold;
        if (u.pause_remaining <= 0.0) assign_new_leg(u, m, rng);
        continue;
      }
      const Vec2 to_wp = u.waypoint - Vec2{u.position.x, u.position.y};
      const double dist = to_wp.norm();
      const double step = u.speed * remaining;
      if (step >= dist || dist <= 0.0) {
        u.position.x = u.waypoint.x;
        u.position.y = u.waypoint.y;
        remaining -= u.speed > 0.0 ? dist / u.speed : remaining;
        u.pause_remaining = rng.uniform(m.pause_min, m.pause_max);
        if (u.pause_remaining <= 0.0) {
          assign_new_leg(u, m, rng);
          if (u.speed <= 0.0) break;
        }
      } else {
        u.position.x += to_wp.x / dist * step;
        u.position.y += to_wp.y / dist * step;
        remaining = 0.0;
      }
    }
    u.position.x = std::clamp(u.position.x, 0.0, m.room_dims.x);
    u.position.y = std::clamp(u.position.y, 0.0, m.room_dims.y);
    u.position.z = m.rx_height;
  }
  std::erase_if(users, [](const UserState& u) {
    return u.session_remaining < 0.0 || u.residence_remaining < 0.0;
  });
}

}  // namespace owc
