#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "owcsim/config.hpp"
#include "owcsim/predictor.hpp"

namespace owc {

struct SlotMetrics {
  int slot = 0;
  double sum_rate = 0.0;      // bit/s, time-averaged over the slot
  double total_power = 0.0;   // W, time-averaged
  double cf_db = 0.0;         // 10 log10(sum rate / total power)
  double ee_objective = 0.0;  // sum ln C / sum P at slot end
  double mean_ber_bound = 0.0;
  double prediction_loss = 0.0;     // MAE of the previous slot's forecast
  double loss_violation = 0.0;      // fraction with actual > forecast
  double unserved = 0.0;            // time-averaged count below QoS
  int optimizer_iters = 0;          // outer iterations over APs and sweeps
  int interference_sweeps = 0;
  int users_active = 0;             // at slot end
  std::vector<double> per_ap_ee;    // ln-objective per AP at slot end
  std::vector<double> per_class_rate;   // bit/s by class id
  // Rate counted only while the class QoS floor is met; the per-class
  // consumption factor is a delivered-service metric.
  std::vector<double> per_class_delivered;
  std::vector<double> per_class_power;  // W by class id
};

struct ForecastRow {
  int slot, ap, class_id, basis, n_tilde, actual;
  double p_tau, q_tau, mu_hat, loss;
};

struct AllocRow {
  int slot, ap, class_id, iters;
  std::uint64_t user;
  double rho, power, rate, lambda, mu, ee_ap;
  bool converged;
};

struct SnapshotRow {
  int slot;
  std::uint64_t user;
  int class_id;
  double x, y;
  int ap;  // -1 when unassociated
};

struct RunResult {
  ScenarioConfig config;
  std::vector<SlotMetrics> slots;
  // Aggregates over post-warmup slots.
  double mean_cf_db = 0.0;
  double mean_sum_rate = 0.0;
  double mean_prediction_loss = 0.0;
  double mean_loss_violation = 0.0;
  double mean_unserved = 0.0;
  double mean_optimizer_iters = 0.0;
  double median_optimizer_iters = 0.0;
  std::vector<double> mean_class_cf_db;  // by class id
  // Conservation audit counters.
  std::uint64_t arrivals_total = 0;
  std::uint64_t departures_total = 0;
  double wall_seconds = 0.0;

  std::vector<ForecastRow> forecast_rows;
  std::vector<AllocRow> alloc_rows;
  std::vector<SnapshotRow> snapshot_rows;
};

// State-carrying simulation; run_slot advances one full slot.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);

  SlotMetrics run_slot();
  int slot_index() const { return slot_; }
  const std::vector<UserState>& users() const { return users_; }
  std::uint64_t arrivals_total() const { return arrivals_total_; }
  std::uint64_t departures_total() const { return departures_total_; }
  std::uint64_t initial_users() const { return std::uint64_t(cfg_.users_initial); }

  std::vector<ForecastRow> forecast_rows;
  std::vector<AllocRow> alloc_rows;
  std::vector<SnapshotRow> snapshot_rows;

 private:
  struct PairKey {
    int ap, class_id;
    bool operator<(const PairKey& o) const {
      return ap != o.ap ? ap < o.ap : class_id < o.class_id;
    }
  };
  struct SlotWindow {
    int arrivals = 0;
    double span = 0.0;
  };

  int zone_of(const Vec3& pos) const;
  double gain_to(const UserState& u, int ap) const;
  // Planning gains: averaged over the user's positions observed during the
  // ending slot, so the association is robust to within-slot motion.
  std::vector<std::vector<double>> planning_gains() const;
  double interference_for(int serving_ap, const UserState& u,
                          const std::vector<double>& spends) const;
  std::vector<double> ap_spends() const;
  void boundary_allocate();
  void admit_arrival(UserState& u, const std::vector<double>& spends);
  void rebalance_uniform(int ap);
  double rate_of(const UserState& u, const std::vector<double>& spends) const;

  ScenarioConfig cfg_;
  Scheme scheme_;
  PhyContext phy_;
  TransformedBeam beam_;
  std::vector<Vec3> ap_pos_;
  std::vector<ApGeometry> ap_geom_;
  int slot_ = 0;
  std::uint64_t next_user_id_ = 0;
  std::uint64_t arrivals_total_ = 0;
  std::uint64_t departures_total_ = 0;
  std::vector<UserState> users_;

  // Per (AP, class): arrival-count windows for the rate estimator and the
  // forecast standing for the upcoming slot.
  std::map<PairKey, std::deque<SlotWindow>> windows_;
  std::map<PairKey, int> arrivals_this_slot_;
  std::map<PairKey, DemandForecast> forecast_;
  std::map<PairKey, int> arrival_caps_;  // free predicted seats mid-slot
  int opt_iters_this_slot_ = 0;
  int sweeps_this_slot_ = 0;
  std::vector<double> last_per_ap_ee_;
};

RunResult run_scenario(const ScenarioConfig& cfg);

enum class SweepAxis { mu, tau, snr, klass };

SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepPoint {
  double value = 0.0;
  Scheme scheme = Scheme::baseline;
  RunResult result;
};

// One run per (value, scheme) with matched seeds across schemes; executed on
// a small work pool, merged deterministically.
std::vector<SweepPoint> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                              const std::vector<double>& values, int jobs);

// CSV artifacts. Every file starts with a comment line carrying the tool
// version, config hash and seed.
std::string version_string();
std::string csv_header_comment(const ScenarioConfig& cfg);
void write_metrics_csv(const std::string& path, const RunResult& r);
void write_aggregate_csv(const std::string& path, const RunResult& r);
void write_sweep_csv(const std::string& path, const ScenarioConfig& cfg,
                     SweepAxis axis, const std::vector<SweepPoint>& points);
void write_forecast_csv(const std::string& path, const RunResult& r);
void write_alloc_csv(const std::string& path, const RunResult& r);
void write_snapshots_csv(const std::string& path, const RunResult& r);
void write_ber_csv(const std::string& path, const ScenarioConfig& cfg,
                   const std::vector<std::tuple<std::string, int, BerPoint>>& rows);

}  // namespace owc
