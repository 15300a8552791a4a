#include "owcsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "owcsim/errors.hpp"

namespace owc {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const ServiceClass& class_by_id(const ScenarioConfig& cfg, int id) {
  for (const auto& k : cfg.classes) {
    if (k.id == id) return k;
  }
  throw Error(ErrorCode::config_invalid, "unknown class id");
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg),
      scheme_(cfg.scheme_enum()),
      phy_(cfg.phy_context()),
      beam_(cfg.beam()),
      ap_pos_(cfg.ap_positions()) {
  cfg_.validate();
  for (int a = 0; a < int(ap_pos_.size()); ++a) {
    ap_geom_.push_back(cfg_.ap_geometry(a));
  }
  last_per_ap_ee_.assign(ap_pos_.size(), 0.0);

  // Initial population: classes round-robin, uniform positions.
  Rng rng = Rng::derive(cfg_.seed, "init");
  const MobilityConfig mob = cfg_.mobility_config();
  for (int i = 0; i < cfg_.users_initial; ++i) {
    const ServiceClass& k = cfg_.classes[std::size_t(i) % cfg_.classes.size()];
    UserState u;
    u.id = next_user_id_++;
    u.class_id = k.id;
    u.position = {rng.uniform(0.0, mob.room_dims.x),
                  rng.uniform(0.0, mob.room_dims.y), mob.rx_height};
    u.waypoint = {rng.uniform(0.0, mob.room_dims.x),
                  rng.uniform(0.0, mob.room_dims.y)};
    u.speed = rng.uniform(mob.speed_min, mob.speed_max);
    u.session_remaining = sample_session_duration(k, rng);
    u.residence_remaining = rng.exponential(mob.mean_residence);
    users_.push_back(u);
  }
}

int Simulation::zone_of(const Vec3& pos) const {
  int best = 0;
  double best_d = (pos - ap_pos_[0]).norm_sq();
  for (int a = 1; a < int(ap_pos_.size()); ++a) {
    const double d = (pos - ap_pos_[std::size_t(a)]).norm_sq();
    if (d < best_d) {
      best_d = d;
      best = a;
    }
  }
  return best;
}

double Simulation::gain_to(const UserState& u, int ap) const {
  ReceiverGeometry rx = cfg_.receiver_at(u.position);
  return aggregate_gain(ap_geom_[std::size_t(ap)], rx, beam_);
}

std::vector<std::vector<double>> Simulation::planning_gains() const {
  // Expected gain over the coming slot: extrapolate each user's current leg
  // (pause, then straight toward the waypoint, holding there) and average
  // the gain along that predicted trail.
  std::vector<std::vector<double>> g(users_.size());
  const double tau = cfg_.slot_tau;
  for (std::size_t u = 0; u < users_.size(); ++u) {
    const UserState& us = users_[u];
    g[u].assign(ap_pos_.size(), 0.0);
    std::vector<Vec3> samples;
    const Vec2 leg = us.waypoint - Vec2{us.position.x, us.position.y};
    const double dist = leg.norm();
    for (int k = 0; k <= 6; ++k) {
      const double t = tau * k / 6.0;
      const double walk =
          us.speed * std::max(0.0, t - us.pause_remaining);
      const double along = dist > 0.0 ? std::min(walk, dist) : 0.0;
      samples.push_back({us.position.x + (dist > 0.0 ? leg.x / dist * along : 0.0),
                         us.position.y + (dist > 0.0 ? leg.y / dist * along : 0.0),
                         us.position.z});
    }
    ReceiverGeometry rx = cfg_.receiver_at(us.position);
    for (int a = 0; a < int(ap_pos_.size()); ++a) {
      double acc = 0.0;
      for (const auto& pos : samples) {
        rx.position = pos;
        acc += aggregate_gain(ap_geom_[std::size_t(a)], rx, beam_);
      }
      g[u][std::size_t(a)] = acc / double(samples.size());
    }
  }
  return g;
}

std::vector<double> Simulation::ap_spends() const {
  std::vector<double> spends(ap_pos_.size(), 0.0);
  for (const auto& u : users_) {
    if (u.serving_ap) spends[std::size_t(*u.serving_ap)] += u.allocated_power;
  }
  return spends;
}

double Simulation::interference_for(int serving_ap, const UserState& u,
                                    const std::vector<double>& spends) const {
  double acc = 0.0;
  if (cfg_.interference_model == "gain_weighted") {
    for (int a = 0; a < int(ap_pos_.size()); ++a) {
      if (a == serving_ap) continue;
      const double rh = phy_.responsivity * gain_to(u, a);
      acc += rh * rh * spends[std::size_t(a)];
    }
  } else {
    for (int a = 0; a < int(ap_pos_.size()); ++a) {
      if (a != serving_ap) acc += spends[std::size_t(a)];
    }
  }
  return acc;
}

double Simulation::rate_of(const UserState& u,
                           const std::vector<double>& spends) const {
  if (!u.serving_ap || u.allocated_power <= 0.0) return 0.0;
  const double g = gain_to(u, *u.serving_ap);
  if (g <= 0.0) return 0.0;
  const double intf = interference_for(*u.serving_ap, u, spends);
  return user_rate(u.allocated_power, g, phy_.responsivity, intf, phy_.link,
                   phy_.ofdm, phy_.noise);
}

void Simulation::rebalance_uniform(int ap) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (users_[i].serving_ap && *users_[i].serving_ap == ap) members.push_back(i);
  }
  if (members.empty()) return;
  const double share = cfg_.ap_budget() / double(members.size());
  for (std::size_t i : members) {
    const auto& k = class_by_id(cfg_, users_[i].class_id);
    users_[i].allocated_power = std::min(share, k.p_max);
  }
}

void Simulation::admit_arrival(UserState& u, const std::vector<double>& spends) {
  if (scheme_ == Scheme::baseline) {
    u.serving_ap = zone_of(u.position);
    rebalance_uniform(*u.serving_ap);
    return;
  }
  // Predictive admission: best-gain AP whose budget covers the arrival. The
  // forecast seats are planning state; an arrival beyond the plan is still
  // served (fair across schemes) and recorded against the reservation.
  std::vector<std::pair<double, int>> ranked;
  for (int a = 0; a < int(ap_pos_.size()); ++a) {
    const double g = gain_to(u, a);
    if (g > 0.0) ranked.push_back({g, a});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    return x.first > y.first;
  });
  for (const auto& [g, a] : ranked) {
    const auto& k = class_by_id(cfg_, u.class_id);
    if (scheme_ == Scheme::pdp_opa) {
      const double intf = interference_for(a, u, spends);
      const FloorResult f = min_power_floor(intf, k, g, phy_);
      const double budget_left = cfg_.ap_budget() - spends[std::size_t(a)];
      const double want = f.feasible ? f.value : k.p_min;
      if (want > budget_left) continue;
      u.serving_ap = a;
      u.allocated_power = want;
      u.qos_missed = !f.feasible;
    } else {
      u.serving_ap = a;
      rebalance_uniform(a);
    }
    auto it = arrival_caps_.find({a, u.class_id});
    if (it != arrival_caps_.end() && it->second > 0) --it->second;
    return;
  }
  u.serving_ap.reset();
  u.allocated_power = 0.0;
}

void Simulation::boundary_allocate() {
  opt_iters_this_slot_ = 0;
  sweeps_this_slot_ = 0;
  const std::vector<double> spends_prev = ap_spends();
  const auto gains = planning_gains();
  const int n_aps = int(ap_pos_.size());

  std::vector<Vec3> positions;
  positions.reserve(users_.size());
  for (const auto& u : users_) positions.push_back(u.position);

  if (scheme_ == Scheme::baseline) {
    const auto serving = associate_distance(positions, ap_pos_);
    for (std::size_t i = 0; i < users_.size(); ++i) {
      users_[i].serving_ap = serving[i];
      users_[i].qos_missed = false;
      users_[i].allocated_power = 0.0;
    }
    for (int a = 0; a < n_aps; ++a) rebalance_uniform(a);
    return;
  }

  // Predictive association: gains, per-candidate floors, forecast-based
  // budget reservations for yet-to-arrive users.
  PdpAssociationInput in;
  in.gains = gains;
  in.floors.assign(users_.size(), std::vector<double>(std::size_t(n_aps), 0.0));
  in.class_of.resize(users_.size());
  in.min_rates.resize(users_.size());
  in.ap_budgets.assign(std::size_t(n_aps), cfg_.ap_budget());
  for (std::size_t u = 0; u < users_.size(); ++u) {
    const auto& k = class_by_id(cfg_, users_[u].class_id);
    in.class_of[u] = k.id;
    in.min_rates[u] = k.min_rate;
    for (int a = 0; a < n_aps; ++a) {
      const double intf =
          interference_for(a, users_[u], spends_prev);
      const FloorResult f = min_power_floor(intf, k, gains[u][std::size_t(a)], phy_);
      in.floors[u][std::size_t(a)] = std::min(f.value, k.p_max);
    }
  }
  std::map<PairKey, int> present;
  for (const auto& u : users_) {
    ++present[{zone_of(u.position), u.class_id}];
  }
  if (!forecast_.empty()) {
    in.reserved.assign(cfg_.classes.size(),
                       std::vector<double>(std::size_t(n_aps), 0.0));
    for (const auto& [key, f] : forecast_) {
      const auto& k = class_by_id(cfg_, key.class_id);
      auto it = present.find(key);
      const int here = it == present.end() ? 0 : it->second;
      const int expected_extra = std::max(0, f.n_tilde - here);
      in.reserved[std::size_t(key.class_id)][std::size_t(key.ap)] =
          expected_extra * k.p_min;
    }
  }
  const auto serving = associate_pdp(in);
  std::map<PairKey, int> admitted;
  for (std::size_t i = 0; i < users_.size(); ++i) {
    users_[i].serving_ap = serving[i];
    users_[i].qos_missed = false;
    users_[i].allocated_power = 0.0;
    if (serving[i]) ++admitted[{*serving[i], users_[i].class_id}];
  }
  arrival_caps_.clear();
  for (const auto& [key, f] : forecast_) {
    auto it = admitted.find(key);
    const int used = it == admitted.end() ? 0 : it->second;
    arrival_caps_[key] = std::max(0, f.n_tilde - used);
  }

  if (scheme_ == Scheme::pdp_upa) {
    for (int a = 0; a < n_aps; ++a) rebalance_uniform(a);
    return;
  }

  // PDP-OPA: per-AP energy-efficiency optimization with Jacobi interference
  // sweeps. Floors chase the interference estimate until spends settle.
  std::vector<double> spends = spends_prev;
  OptimizerOptions opts;
  opts.tol = cfg_.opt_tol;
  opts.max_iter = cfg_.opt_max_iter;
  opts.step_scale = cfg_.opt_step_scale;
  opts.damping = cfg_.opt_damping;
  opts.inner_sweeps = cfg_.opt_inner_sweeps;

  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_aps));
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (users_[i].serving_ap) {
      members[std::size_t(*users_[i].serving_ap)].push_back(i);
    }
  }
  std::vector<EEResult> last_result(static_cast<std::size_t>(n_aps));
  std::vector<std::vector<double>> last_rho(static_cast<std::size_t>(n_aps));
  for (int sweep = 0; sweep < cfg_.max_interference_sweeps; ++sweep) {
    std::vector<double> next_spends(std::size_t(n_aps), 0.0);
    for (int a = 0; a < n_aps; ++a) {
      std::vector<OptUserInput> inputs;
      for (std::size_t i : members[std::size_t(a)]) {
        const auto& k = class_by_id(cfg_, users_[i].class_id);
        OptUserInput oi;
        oi.user_id = users_[i].id;
        oi.class_id = k.id;
        oi.gain = gains[i][std::size_t(a)];
        oi.interference = interference_for(a, users_[i], spends);
        const FloorResult f = min_power_floor(oi.interference, k, oi.gain, phy_);
        oi.rho = std::min(f.value, k.p_max);
        oi.floor_feasible = f.feasible;
        oi.p_max = k.p_max;
        oi.p_min = k.p_min;
        inputs.push_back(oi);
      }
      EEResult res = optimize_ap(inputs, phy_, cfg_.ap_budget(), opts);
      opt_iters_this_slot_ += res.iterations;
      for (double p : res.powers) next_spends[std::size_t(a)] += p;
      last_rho[std::size_t(a)].clear();
      for (const auto& oi : inputs) last_rho[std::size_t(a)].push_back(oi.rho);
      last_result[std::size_t(a)] = std::move(res);
    }
    ++sweeps_this_slot_;
    double delta = 0.0;
    for (int a = 0; a < n_aps; ++a) {
      delta = std::max(delta, std::abs(next_spends[std::size_t(a)] -
                                       spends[std::size_t(a)]));
    }
    spends = next_spends;
    if (sweep + 1 >= cfg_.interference_sweeps && delta < 1e-6) break;
  }
  for (int a = 0; a < n_aps; ++a) {
    const auto& res = last_result[std::size_t(a)];
    const auto& mem = members[std::size_t(a)];
    for (std::size_t j = 0; j < mem.size(); ++j) {
      users_[mem[j]].allocated_power = res.powers[j];
      users_[mem[j]].qos_missed = res.qos_missed[j];
    }
    if (cfg_.dump_alloc && !mem.empty()) {
      for (std::size_t j = 0; j < mem.size(); ++j) {
        const auto& u = users_[mem[j]];
        alloc_rows.push_back({slot_, a, u.class_id, res.iterations, u.id,
                              last_rho[std::size_t(a)][j], u.allocated_power,
                              res.rates[j], res.duals.lambda[j], res.duals.mu,
                              res.ee_value, res.converged});
      }
    }
  }
}

SlotMetrics Simulation::run_slot() {
  const double tau = cfg_.slot_tau;
  const MobilityConfig mob = cfg_.mobility_config();
  const int nsub = std::max(1, int(std::lround(tau / cfg_.obs_interval)));
  const double dt = tau / nsub;
  Rng rng = Rng::derive(cfg_.seed, "traffic", std::uint64_t(slot_));

  boundary_allocate();

  SlotMetrics m;
  m.slot = slot_;
  m.per_class_rate.assign(cfg_.classes.size(), 0.0);
  m.per_class_delivered.assign(cfg_.classes.size(), 0.0);
  m.per_class_power.assign(cfg_.classes.size(), 0.0);
  arrivals_this_slot_.clear();
  std::map<PairKey, std::vector<int>> counts;
  std::map<PairKey, std::vector<double>> stamps;

  double acc_rate = 0.0, acc_power = 0.0, acc_ber = 0.0, acc_unserved = 0.0;
  std::vector<double> acc_class_rate(cfg_.classes.size(), 0.0);
  std::vector<double> acc_class_delivered(cfg_.classes.size(), 0.0);
  std::vector<double> acc_class_power(cfg_.classes.size(), 0.0);
  std::uint64_t ber_samples = 0;

  for (int step = 0; step < nsub; ++step) {
    std::map<std::uint64_t, int> zone_before;
    for (const auto& u : users_) zone_before[u.id] = zone_of(u.position);

    const std::size_t before = users_.size();
    advance(users_, dt, mob, rng);
    departures_total_ += before - users_.size();

    std::vector<double> spends = ap_spends();
    for (const auto& k : cfg_.classes) {
      auto fresh = spawn_arrivals(k, dt, mob, rng, next_user_id_,
                                  cfg_.arrival_scale);
      for (auto& u : fresh) {
        ++arrivals_total_;
        ++arrivals_this_slot_[{zone_of(u.position), k.id}];
        users_.push_back(u);
        admit_arrival(users_.back(), spends);
        spends = ap_spends();
      }
    }
    // Zone handoffs count as arrivals for the rate estimator.
    for (const auto& u : users_) {
      auto it = zone_before.find(u.id);
      if (it != zone_before.end()) {
        const int z = zone_of(u.position);
        if (z != it->second) ++arrivals_this_slot_[{z, u.class_id}];
      }
    }

    // Observation sampling grid.
    const double t_in_slot = (step + 1) * dt;
    std::map<PairKey, int> now;
    for (const auto& u : users_) ++now[{zone_of(u.position), u.class_id}];
    for (int a = 0; a < int(ap_pos_.size()); ++a) {
      for (const auto& k : cfg_.classes) {
        const PairKey key{a, k.id};
        auto it = now.find(key);
        counts[key].push_back(it == now.end() ? 0 : it->second);
        stamps[key].push_back(t_in_slot);
      }
    }

    // Metric accumulation at this instant.
    spends = ap_spends();
    const double xi = phy_.ofdm.utilization_xi();
    const double a2 = phy_.ofdm.norm_alpha() * phy_.ofdm.norm_alpha();
    for (const auto& u : users_) {
      const auto& k = class_by_id(cfg_, u.class_id);
      const double rate = rate_of(u, spends);
      acc_rate += rate;
      acc_power += u.allocated_power;
      acc_class_rate[std::size_t(k.id)] += rate;
      acc_class_power[std::size_t(k.id)] += u.allocated_power;
      if (!u.serving_ap || rate < k.min_rate * (1.0 - 1e-9)) {
        acc_unserved += 1.0;
      } else {
        acc_class_delivered[std::size_t(k.id)] += rate;
      }
      if (u.serving_ap && u.allocated_power > 0.0) {
        const double g = gain_to(u, *u.serving_ap);
        const double rh = phy_.responsivity * g;
        const double intf = interference_for(*u.serving_ap, u, spends);
        const double sinr = rh * rh * a2 * u.allocated_power /
                            (xi * phy_.noise.variance_sigma2 + intf);
        const auto choice = max_constellation(sinr, phy_.link.sinr_gap_gamma);
        acc_ber += ber_upper_bound(sinr, choice.f);
        ++ber_samples;
      }
    }
  }

  m.sum_rate = acc_rate / nsub;
  m.total_power = acc_power / nsub;
  m.cf_db = (m.sum_rate > 0.0 && m.total_power > 0.0)
                ? 10.0 * std::log10(m.sum_rate / m.total_power)
                : 0.0;
  m.mean_ber_bound = ber_samples ? acc_ber / double(ber_samples) : 0.0;
  m.unserved = acc_unserved / nsub;
  m.optimizer_iters = opt_iters_this_slot_;
  m.interference_sweeps = sweeps_this_slot_;
  m.users_active = int(users_.size());
  for (std::size_t k = 0; k < cfg_.classes.size(); ++k) {
    m.per_class_rate[k] = acc_class_rate[k] / nsub;
    m.per_class_delivered[k] = acc_class_delivered[k] / nsub;
    m.per_class_power[k] = acc_class_power[k] / nsub;
  }

  // End-of-slot network objective and per-AP EE.
  {
    const std::vector<double> spends = ap_spends();
    std::vector<double> rates, powers;
    m.per_ap_ee.assign(ap_pos_.size(), 0.0);
    std::vector<double> ap_num(ap_pos_.size(), 0.0), ap_den(ap_pos_.size(), 0.0);
    for (const auto& u : users_) {
      const double r = rate_of(u, spends);
      if (u.serving_ap && r > 0.0 && u.allocated_power > 0.0) {
        rates.push_back(r);
        powers.push_back(u.allocated_power);
        ap_num[std::size_t(*u.serving_ap)] += rate_utility(r);
        ap_den[std::size_t(*u.serving_ap)] += u.allocated_power;
      }
    }
    for (std::size_t a = 0; a < ap_pos_.size(); ++a) {
      m.per_ap_ee[a] = ap_den[a] > 0.0 ? ap_num[a] / ap_den[a] : 0.0;
    }
    try {
      m.ee_objective = network_cf(rates, powers).objective;
    } catch (const Error&) {
      m.ee_objective = 0.0;
    }
  }

  // Score the standing forecast against the end-of-slot counts, then build
  // the forecast for the next slot.
  if (!forecast_.empty()) {
    std::vector<int> fc, ac;
    for (const auto& [key, f] : forecast_) {
      const auto it = counts.find(key);
      const int actual = it == counts.end() || it->second.empty()
                             ? 0
                             : it->second.back();
      fc.push_back(f.n_tilde);
      ac.push_back(actual);
      if (cfg_.dump_forecasts) {
        forecast_rows.push_back({slot_, key.ap, key.class_id, f.basis_count,
                                 f.n_tilde, actual, f.p_tau, f.q_tau, f.mu_hat,
                                 std::abs(double(f.n_tilde - actual))});
      }
    }
    const PredictionLoss pl = prediction_loss(fc, ac);
    m.prediction_loss = pl.mae;
    m.loss_violation = pl.violation_rate;
  }

  if (scheme_ != Scheme::baseline) {
    PredictorParams params;
    params.epsilon = cfg_.epsilon;
    params.horizon_tau = tau;
    params.pmf_tail_cutoff = cfg_.pmf_tail_cutoff;
    forecast_.clear();
    for (int a = 0; a < int(ap_pos_.size()); ++a) {
      for (const auto& k : cfg_.classes) {
        const PairKey key{a, k.id};
        auto& wins = windows_[key];
        const auto ait = arrivals_this_slot_.find(key);
        wins.push_back({ait == arrivals_this_slot_.end() ? 0 : ait->second, tau});
        while (int(wins.size()) > cfg_.window_slots) wins.pop_front();
        ObservationWindow w;
        w.ap = a;
        w.class_id = k.id;
        w.timestamps = stamps[key];
        w.counts = counts[key];
        for (const auto& sw : wins) {
          w.arrivals_seen += sw.arrivals;
          w.window_span += sw.span;
        }
        forecast_[key] = predict_slot(w, params, k, cfg_.mean_residence);
      }
    }
  }

  if (cfg_.dump_snapshots) {
    for (const auto& u : users_) {
      snapshot_rows.push_back({slot_, u.id, u.class_id, u.position.x,
                               u.position.y,
                               u.serving_ap ? *u.serving_ap : -1});
    }
  }

  ++slot_;
  return m;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  out.config = cfg;
  Simulation sim(cfg);
  for (int s = 0; s < cfg.slots_total; ++s) {
    out.slots.push_back(sim.run_slot());
  }
  out.arrivals_total = sim.arrivals_total();
  out.departures_total = sim.departures_total();
  out.forecast_rows = std::move(sim.forecast_rows);
  out.alloc_rows = std::move(sim.alloc_rows);
  out.snapshot_rows = std::move(sim.snapshot_rows);

  const int from = std::min<int>(cfg.warmup_slots, int(out.slots.size()));
  std::vector<double> iters;
  int n = 0;
  std::vector<double> class_rate(cfg.classes.size(), 0.0);
  std::vector<double> class_power(cfg.classes.size(), 0.0);
  for (std::size_t i = std::size_t(from); i < out.slots.size(); ++i) {
    const auto& s = out.slots[i];
    out.mean_cf_db += s.cf_db;
    out.mean_sum_rate += s.sum_rate;
    out.mean_prediction_loss += s.prediction_loss;
    out.mean_loss_violation += s.loss_violation;
    out.mean_unserved += s.unserved;
    out.mean_optimizer_iters += s.optimizer_iters;
    iters.push_back(double(s.optimizer_iters));
    for (std::size_t k = 0; k < cfg.classes.size(); ++k) {
      class_rate[k] += s.per_class_delivered[k];
      class_power[k] += s.per_class_power[k];
    }
    ++n;
  }
  if (n > 0) {
    out.mean_cf_db /= n;
    out.mean_sum_rate /= n;
    out.mean_prediction_loss /= n;
    out.mean_loss_violation /= n;
    out.mean_unserved /= n;
    out.mean_optimizer_iters /= n;
    std::sort(iters.begin(), iters.end());
    out.median_optimizer_iters = iters[iters.size() / 2];
    out.mean_class_cf_db.assign(cfg.classes.size(), 0.0);
    for (std::size_t k = 0; k < cfg.classes.size(); ++k) {
      out.mean_class_cf_db[k] =
          (class_rate[k] > 0.0 && class_power[k] > 0.0)
              ? 10.0 * std::log10(class_rate[k] / class_power[k])
              : 0.0;
    }
  } else {
    out.mean_class_cf_db.assign(cfg.classes.size(), 0.0);
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "mu") return SweepAxis::mu;
  if (s == "tau") return SweepAxis::tau;
  if (s == "snr") return SweepAxis::snr;
  if (s == "class") return SweepAxis::klass;
  throw Error(ErrorCode::config_invalid, "unknown sweep axis '" + s + "'");
}

namespace {

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis,
                          double value) {
  ScenarioConfig cfg = base;
  switch (axis) {
    case SweepAxis::mu:
      cfg.arrival_scale = value;
      break;
    case SweepAxis::tau:
      cfg.slot_tau = value;
      break;
    case SweepAxis::snr: {
      // Synthetic noise-scaling axis: value is the SNR uplift in dB applied
      // by scaling the noise floor down.
      const double base_psd = base.noise_model().psd_nt;
      cfg.psd_nt_override = base_psd * std::pow(10.0, -value / 10.0);
      break;
    }
    case SweepAxis::klass:
      for (auto& k : cfg.classes) k.min_rate *= value;
      break;
  }
  return cfg;
}

}  // namespace

std::vector<SweepPoint> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                              const std::vector<double>& values, int jobs) {
  static const Scheme kSchemes[] = {Scheme::baseline, Scheme::pdp_upa,
                                    Scheme::pdp_opa};
  struct Task {
    double value;
    Scheme scheme;
  };
  std::vector<Task> tasks;
  for (double v : values) {
    for (Scheme s : kSchemes) tasks.push_back({v, s});
  }
  std::vector<SweepPoint> out(tasks.size());
  std::atomic<std::size_t> cursor{0};
  const int workers = std::max(1, jobs);
  auto work = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      ScenarioConfig c = apply_axis(cfg, axis, tasks[i].value);
      c.scheme = to_string(tasks[i].scheme);
      out[i].value = tasks[i].value;
      out[i].scheme = tasks[i].scheme;
      out[i].result = run_scenario(c);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::string version_string() { return "owcsim 0.1.0"; }

std::string csv_header_comment(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "# " << version_string() << " config=" << std::hex
     << cfg.config_hash() << std::dec << " seed=" << cfg.seed << "\n";
  return os.str();
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io_failure, "cannot write " + path);
  }
  return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << csv_header_comment(r.config);
  out << "slot,scheme,users,sum_rate_bps,total_power_w,cf_db,ee_objective,"
         "mean_ber_bound,prediction_loss,loss_violation,unserved,"
         "optimizer_iters,interference_sweeps";
  for (const auto& k : r.config.classes) out << ",rate_" << k.name << "_bps";
  out << "\n";
  for (const auto& s : r.slots) {
    out << s.slot << "," << r.config.scheme << "," << s.users_active << ","
        << fmt_double(s.sum_rate) << "," << fmt_double(s.total_power) << ","
        << fmt_double(s.cf_db) << "," << fmt_double(s.ee_objective) << ","
        << fmt_double(s.mean_ber_bound) << "," << fmt_double(s.prediction_loss)
        << "," << fmt_double(s.loss_violation) << "," << fmt_double(s.unserved)
        << "," << s.optimizer_iters << "," << s.interference_sweeps;
    for (double v : s.per_class_rate) out << "," << fmt_double(v);
    out << "\n";
  }
}

void write_aggregate_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << csv_header_comment(r.config);
  out << "scheme,slots,mean_cf_db,mean_sum_rate_bps,mean_prediction_loss,"
         "mean_loss_violation,mean_unserved,mean_optimizer_iters,"
         "median_optimizer_iters,arrivals,departures,wall_seconds";
  for (const auto& k : r.config.classes) out << ",cf_" << k.name << "_db";
  out << "\n";
  out << r.config.scheme << "," << r.slots.size() << ","
      << fmt_double(r.mean_cf_db) << "," << fmt_double(r.mean_sum_rate) << ","
      << fmt_double(r.mean_prediction_loss) << ","
      << fmt_double(r.mean_loss_violation) << "," << fmt_double(r.mean_unserved)
      << "," << fmt_double(r.mean_optimizer_iters) << ","
      << fmt_double(r.median_optimizer_iters) << "," << r.arrivals_total << ","
      << r.departures_total << "," << fmt_double(r.wall_seconds);
  for (double v : r.mean_class_cf_db) out << "," << fmt_double(v);
  out << "\n";
}

void write_sweep_csv(const std::string& path, const ScenarioConfig& cfg,
                     SweepAxis axis, const std::vector<SweepPoint>& points) {
  auto out = open_out(path);
  out << csv_header_comment(cfg);
  const char* axis_name = axis == SweepAxis::mu    ? "mu"
                          : axis == SweepAxis::tau ? "tau"
                          : axis == SweepAxis::snr ? "snr"
                                                   : "class";
  out << "axis,value,scheme,mean_cf_db,mean_sum_rate_bps,mean_prediction_loss,"
         "mean_unserved,median_optimizer_iters";
  for (const auto& k : cfg.classes) out << ",cf_" << k.name << "_db";
  out << "\n";
  for (const auto& p : points) {
    out << axis_name << "," << fmt_double(p.value) << "," << to_string(p.scheme)
        << "," << fmt_double(p.result.mean_cf_db) << ","
        << fmt_double(p.result.mean_sum_rate) << ","
        << fmt_double(p.result.mean_prediction_loss) << ","
        << fmt_double(p.result.mean_unserved) << ","
        << fmt_double(p.result.median_optimizer_iters);
    for (double v : p.result.mean_class_cf_db) out << "," << fmt_double(v);
    out << "\n";
  }
}

void write_forecast_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << csv_header_comment(r.config);
  out << "slot,ap,class,basis,p_tau,q_tau,mu_hat,n_tilde,actual,loss\n";
  for (const auto& f : r.forecast_rows) {
    out << f.slot << "," << f.ap << "," << f.class_id << "," << f.basis << ","
        << fmt_double(f.p_tau) << "," << fmt_double(f.q_tau) << ","
        << fmt_double(f.mu_hat) << "," << f.n_tilde << "," << f.actual << ","
        << fmt_double(f.loss) << "\n";
  }
}

void write_alloc_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << csv_header_comment(r.config);
  out << "slot,ap,user,class,rho,power,rate,lambda,mu,ee_ap,converged,iters\n";
  for (const auto& a : r.alloc_rows) {
    out << a.slot << "," << a.ap << "," << a.user << "," << a.class_id << ","
        << fmt_double(a.rho) << "," << fmt_double(a.power) << ","
        << fmt_double(a.rate) << "," << fmt_double(a.lambda) << ","
        << fmt_double(a.mu) << "," << fmt_double(a.ee_ap) << ","
        << (a.converged ? 1 : 0) << "," << a.iters << "\n";
  }
}

void write_snapshots_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << csv_header_comment(r.config);
  out << "slot,user,class,x,y,ap\n";
  for (const auto& s : r.snapshot_rows) {
    out << s.slot << "," << s.user << "," << s.class_id << ","
        << fmt_double(s.x) << "," << fmt_double(s.y) << "," << s.ap << "\n";
  }
}

void write_ber_csv(const std::string& path, const ScenarioConfig& cfg,
                   const std::vector<std::tuple<std::string, int, BerPoint>>& rows) {
  auto out = open_out(path);
  out << csv_header_comment(cfg);
  out << "scheme,F,snr_db,ber,frames,seed\n";
  for (const auto& [scheme, f, pt] : rows) {
    out << scheme << "," << f << "," << fmt_double(pt.snr_db) << ","
        << fmt_double(pt.ber) << "," << pt.bits << "," << cfg.seed << "\n";
  }
}

}  // namespace owc
