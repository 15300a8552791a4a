#pragma once

#include <optional>
#include <vector>

#include "owcsim/ofdm.hpp"
#include "owcsim/traffic.hpp"
#include "owcsim/vec3.hpp"

namespace owc {

// Shared PHY context for rate/floor evaluations.
struct PhyContext {
  OfdmParams ofdm;
  NoiseModel noise;
  QamLink link;
  double responsivity = 0.7;
};

// Binary association: at most one AP per user. Entry a,k,n is 1 exactly when
// serving[n] == a and the user's class is k.
struct AssociationMatrix {
  int ap_count = 0;
  std::vector<std::optional<int>> serving;  // by user slot
  std::vector<int> class_of;                // by user slot

  bool entry(int ap, int class_id, int user) const {
    return serving[std::size_t(user)].has_value() &&
           *serving[std::size_t(user)] == ap &&
           class_of[std::size_t(user)] == class_id;
  }
};

struct FloorResult {
  double value = 0.0;   // max(P_min, QoS inversion)
  bool feasible = true;  // false when the floor exceeds P_max
};

// Inverts the user-rate formula at C_min:
// P_req = Gamma (xi^2 sigma^2 + I) (2^(Cmin/(xi B)) - 1) (2pi/e) / (R H)^2.
FloorResult min_power_floor(double interference, const ServiceClass& cls,
                            double gain, const PhyContext& phy);

// Nearest AP by Euclidean distance; ties broken by lowest AP index.
std::vector<std::optional<int>> associate_distance(
    const std::vector<Vec3>& user_positions, const std::vector<Vec3>& ap_positions);

struct PdpAssociationInput {
  // gains[u][a]: aggregate gain of user u at AP a.
  std::vector<std::vector<double>> gains;
  // floors[u][a]: power floor of user u if served by AP a.
  std::vector<std::vector<double>> floors;
  std::vector<int> class_of;       // by user
  std::vector<double> min_rates;   // C_min per user, drives priority order
  std::vector<double> ap_budgets;  // residual power per AP
  // Reservation for predicted load: budget held back per (AP, class) for
  // users the forecast expects but who have not arrived yet. Empty = none.
  std::vector<std::vector<double>> reserved;
};

// Greedy predictive association: users in descending C_min order, each to
// the feasible AP with the largest gain whose residual budget covers the
// user's floor. Users no AP can admit stay unassociated.
std::vector<std::optional<int>> associate_pdp(const PdpAssociationInput& in);

// Exact derivative of U(C(P)) = ln(C(P)) with respect to P at P_current.
// Throws ZeroRate when C(P_current) is not positive.
double linearize_utility(double p_current, double gain, double interference,
                         const PhyContext& phy);

struct DualState {
  std::vector<double> lambda;  // per user, >= 0
  double mu = 0.0;             // per-AP budget price, >= 0
  double step_alpha1 = 0.1;
  double step_alpha2 = 0.1;
};

// Projected subgradient step: lambda += a1 (rho - P), mu += a2 (sum P - cap),
// both clipped at zero.
void dual_update(DualState& d, const std::vector<double>& powers,
                 const std::vector<double>& floors, double power_cap);

struct OptUserInput {
  std::uint64_t user_id = 0;
  int class_id = 0;
  double gain = 0.0;
  double interference = 0.0;
  double rho = 0.0;    // floor, already >= p_min
  double p_max = 0.0;
  bool floor_feasible = true;  // false -> served at p_min, flagged
  double p_min = 0.0;
  double warm_power = -1.0;    // < 0 -> start at the floor
  double warm_lambda = 0.0;
};

struct OptimizerOptions {
  double tol = 1e-6;
  int max_iter = 500;
  double step_scale = 0.1;   // alpha = step_scale / outer iteration
  double damping = 0.5;
  int inner_sweeps = 10;
  double warm_mu = 0.0;
};

struct IterationRecord {
  double ee = 0.0;
  double primal_residual = 0.0;  // max constraint violation, W
  double dual_residual = 0.0;    // max |projected stationarity gradient|
};

struct EEResult {
  std::vector<double> powers;       // by input order
  std::vector<double> rates;        // bit/s at the frozen interference
  std::vector<bool> qos_missed;     // floor infeasible, pinned at p_min
  DualState duals;
  double ee_value = 0.0;            // sum ln C / sum P
  double cf_db = 0.0;               // 10 log10(sum C / sum P)
  int iterations = 0;
  bool converged = false;
  double complementary_slackness = 0.0;
  std::vector<IterationRecord> trace;
};

// Per-AP energy-efficiency power allocation: Dinkelbach outer loop on the
// ratio with an inner Lagrangian stationarity solve and projected dual
// updates. Interference is frozen by the caller.
EEResult optimize_ap(const std::vector<OptUserInput>& users,
                     const PhyContext& phy, double ap_budget,
                     const OptimizerOptions& opts = {});

// budget / served count, capped per user at its class P_max.
std::vector<double> uniform_power(const std::vector<OptUserInput>& users,
                                  double ap_budget);

struct NetworkCf {
  double objective = 0.0;  // sum ln C / sum P
  double cf_db = 0.0;      // 10 log10(sum C / sum P)
};

// Network-wide objective and consumption factor over served users. Throws
// EmptyNetwork when nothing is served.
NetworkCf network_cf(const std::vector<double>& rates,
                     const std::vector<double>& powers);

}  // namespace owc
