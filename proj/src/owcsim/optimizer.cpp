#include "owcsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "owcsim/errors.hpp"

namespace owc {

namespace {

// Electrical SINR slope: C(P) = xi B log2(1 + s P).
inline double sinr_slope(double gain, double interference,
                         const PhyContext& phy) {
  const double rh = phy.responsivity * gain;
  const double xi = phy.ofdm.utilization_xi();
  return (M_E / (2.0 * M_PI)) * rh * rh /
         (phy.link.sinr_gap_gamma *
          (xi * xi * phy.noise.variance_sigma2 + interference));
}

inline double rate_from_slope(double s, double p, const PhyContext& phy) {
  return phy.ofdm.utilization_xi() * phy.ofdm.bandwidth_b *
         std::log2(1.0 + s * p);
}

// d ln(C)/dP = s / ((1 + sP) ln(1 + sP)).
inline double utility_gradient(double s, double p) {
  const double one_sp = 1.0 + s * p;
  return s / (one_sp * std::log(one_sp));
}

// Monotone-decreasing stationarity LHS g(P) = s/((1+sP) ln(1+sP)) = theta
// solved by bisection; g decreases from +inf (P -> 0+) to 0.
double stationarity_power(double s, double theta, double lo, double hi) {
  if (theta <= 0.0) return hi;
  if (utility_gradient(s, lo) <= theta) return lo;
  if (utility_gradient(s, hi) >= theta) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (utility_gradient(s, mid) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FloorResult min_power_floor(double interference, const ServiceClass& cls,
                            double gain, const PhyContext& phy) {
  if (gain <= 0.0) return {cls.p_min, false};
  const double xi = phy.ofdm.utilization_xi();
  const double rh = phy.responsivity * gain;
  const double snr_needed =
      std::pow(2.0, cls.min_rate / (xi * phy.ofdm.bandwidth_b)) - 1.0;
  const double p_req = phy.link.sinr_gap_gamma *
                       (xi * xi * phy.noise.variance_sigma2 + interference) *
                       snr_needed * (2.0 * M_PI / M_E) / (rh * rh);
  FloorResult out;
  out.value = std::max(cls.p_min, p_req);
  out.feasible = out.value <= cls.p_max;
  return out;
}

std::vector<std::optional<int>> associate_distance(
    const std::vector<Vec3>& user_positions,
    const std::vector<Vec3>& ap_positions) {
  if (ap_positions.empty()) {
    throw Error(ErrorCode::config_invalid, "associate_distance: no APs");
  }
  std::vector<std::optional<int>> out(user_positions.size());
  for (std::size_t u = 0; u < user_positions.size(); ++u) {
    int best = 0;
    double best_d = (user_positions[u] - ap_positions[0]).norm_sq();
    for (std::size_t a = 1; a < ap_positions.size(); ++a) {
      const double d = (user_positions[u] - ap_positions[a]).norm_sq();
      if (d < best_d) {
        best_d = d;
        best = int(a);
      }
    }
    out[u] = best;
  }
  return out;
}

std::vector<std::optional<int>> associate_pdp(const PdpAssociationInput& in) {
  const std::size_t n_users = in.gains.size();
  const std::size_t n_aps = in.ap_budgets.size();
  std::vector<double> residual = in.ap_budgets;
  // Hold back the forecast reservations; they are released to arrivals later.
  if (!in.reserved.empty()) {
    for (std::size_t a = 0; a < n_aps; ++a) {
      double r = 0.0;
      for (const auto& per_class : in.reserved) r += per_class[a];
      residual[a] = std::max(0.0, residual[a] - r);
    }
  }
  std::vector<std::size_t> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return in.min_rates[x] > in.min_rates[y];
  });

  std::vector<std::optional<int>> serving(n_users);
  for (std::size_t u : order) {
    int best = -1;
    double best_gain = 0.0;
    for (std::size_t a = 0; a < n_aps; ++a) {
      const double g = in.gains[u][a];
      if (g <= 0.0) continue;
      if (in.floors[u][a] > residual[a]) continue;
      if (g > best_gain) {
        best_gain = g;
        best = int(a);
      }
    }
    if (best >= 0) {
      serving[u] = best;
      residual[std::size_t(best)] -= in.floors[u][std::size_t(best)];
    }
  }
  return serving;
}

double linearize_utility(double p_current, double gain, double interference,
                         const PhyContext& phy) {
  const double s = sinr_slope(gain, interference, phy);
  const double rate = rate_from_slope(s, p_current, phy);
  if (!(rate > 0.0)) {
    throw Error(ErrorCode::zero_rate,
                "linearize_utility: rate is zero at the linearization point");
  }
  return utility_gradient(s, p_current);
}

void dual_update(DualState& d, const std::vector<double>& powers,
                 const std::vector<double>& floors, double power_cap) {
  double total = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    d.lambda[i] = std::max(
        0.0, d.lambda[i] + d.step_alpha1 * (floors[i] - powers[i]));
    total += powers[i];
  }
  d.mu = std::max(0.0, d.mu + d.step_alpha2 * (total - power_cap));
}

std::vector<double> uniform_power(const std::vector<OptUserInput>& users,
                                  double ap_budget) {
  std::vector<double> out(users.size(), 0.0);
  if (users.empty()) return out;
  const double share = ap_budget / double(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    out[i] = std::min(share, users[i].p_max);
  }
  return out;
}

NetworkCf network_cf(const std::vector<double>& rates,
                     const std::vector<double>& powers) {
  if (rates.size() != powers.size()) {
    throw Error(ErrorCode::length_mismatch, "network_cf: size mismatch");
  }
  if (rates.empty()) {
    throw Error(ErrorCode::empty_network, "network_cf: no served users");
  }
  double sum_u = 0.0, sum_c = 0.0, sum_p = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    sum_u += rate_utility(rates[i]);
    sum_c += rates[i];
    sum_p += powers[i];
  }
  if (sum_p <= 0.0) {
    throw Error(ErrorCode::empty_network, "network_cf: zero total power");
  }
  return {sum_u / sum_p, 10.0 * std::log10(sum_c / sum_p)};
}

EEResult optimize_ap(const std::vector<OptUserInput>& users,
                     const PhyContext& phy, double ap_budget,
                     const OptimizerOptions& opts) {
  EEResult res;
  const std::size_t n = users.size();
  res.powers.assign(n, 0.0);
  res.rates.assign(n, 0.0);
  res.qos_missed.assign(n, false);
  res.duals.lambda.assign(n, 0.0);
  if (n == 0) {
    res.converged = true;
    return res;
  }

  // Pinned users: infeasible floors are served at p_min and excluded from
  // the optimization; their spend still counts against the budget.
  std::vector<std::size_t> opt;   // indices of optimized users
  std::vector<double> slope(n), rho(n), upper(n);
  double pinned_power = 0.0;
  double rho_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    slope[i] = sinr_slope(users[i].gain, users[i].interference, phy);
    rho[i] = users[i].rho;
    upper[i] = users[i].p_max;
    if (!users[i].floor_feasible || slope[i] <= 0.0) {
      res.qos_missed[i] = true;
      res.powers[i] = users[i].p_min;
      pinned_power += users[i].p_min;
    } else {
      opt.push_back(i);
      rho_sum += rho[i];
    }
  }
  double budget = std::max(0.0, ap_budget - pinned_power);
  // An overloaded AP sheds the largest floors to p_min until the rest fit.
  {
    std::vector<std::size_t> by_rho = opt;
    std::sort(by_rho.begin(), by_rho.end(),
              [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });
    std::size_t shed = 0;
    while (rho_sum > budget && shed < by_rho.size()) {
      const std::size_t i = by_rho[shed++];
      res.qos_missed[i] = true;
      res.powers[i] = users[i].p_min;
      pinned_power += users[i].p_min;
      rho_sum -= rho[i];
      budget = std::max(0.0, ap_budget - pinned_power);
      opt.erase(std::remove(opt.begin(), opt.end(), i), opt.end());
    }
  }

  auto project = [&](std::vector<double>& p) {
    double above = 0.0, floor_total = 0.0;
    for (std::size_t i : opt) {
      p[i] = std::clamp(p[i], rho[i], upper[i]);
      above += p[i] - rho[i];
      floor_total += rho[i];
    }
    const double total = floor_total + above;
    if (total > budget && above > 0.0) {
      const double keep = (budget - floor_total) / above;
      for (std::size_t i : opt) p[i] = rho[i] + (p[i] - rho[i]) * keep;
    }
  };

  auto subtractive = [&](const std::vector<double>& p, double ee) {
    double v = 0.0;
    for (std::size_t i : opt) {
      v += rate_utility(rate_from_slope(slope[i], p[i], phy)) - ee * p[i];
    }
    return v;
  };

  auto ratio = [&](const std::vector<double>& p) {
    double num = 0.0, den = 0.0;
    for (std::size_t i : opt) {
      num += rate_utility(rate_from_slope(slope[i], p[i], phy));
      den += p[i];
    }
    return den > 0.0 ? num / den : 0.0;
  };

  std::vector<double> p = res.powers;
  for (std::size_t i : opt) {
    p[i] = users[i].warm_power >= 0.0 ? users[i].warm_power : rho[i];
    res.duals.lambda[i] = users[i].warm_lambda;
  }
  project(p);
  res.duals.mu = opts.warm_mu;

  if (opt.empty()) {
    res.converged = true;
  }
  double ee = opt.empty() ? 0.0 : ratio(p);
  std::vector<double> p_next = p;
  std::vector<double> opt_rho(opt.size()), opt_p(opt.size());
  int it = 0;
  for (; it < opts.max_iter && !opt.empty(); ++it) {
    res.duals.step_alpha1 = opts.step_scale / double(it + 1);
    res.duals.step_alpha2 = opts.step_scale / double(it + 1);

    // Inner stationarity solve at frozen duals: d ln C/dP = EE - lambda + mu.
    p_next = p;
    for (int sweep = 0; sweep < opts.inner_sweeps; ++sweep) {
      double delta = 0.0;
      for (std::size_t i : opt) {
        const double theta = ee - res.duals.lambda[i] + res.duals.mu;
        const double target =
            stationarity_power(slope[i], theta, rho[i], upper[i]);
        const double blended =
            opts.damping * p_next[i] + (1.0 - opts.damping) * target;
        delta = std::max(delta, std::abs(blended - p_next[i]));
        p_next[i] = blended;
      }
      if (delta < 1e-15) break;
    }
    project(p_next);

    // Dinkelbach safeguard: never accept a step that lowers the subtractive
    // objective below the incumbent's (which is zero at p itself).
    if (subtractive(p_next, ee) >= subtractive(p, ee)) {
      p = p_next;
    }

    // Projected subgradient updates on the multipliers.
    double total = 0.0;
    for (std::size_t i : opt) {
      res.duals.lambda[i] = std::max(
          0.0, res.duals.lambda[i] + res.duals.step_alpha1 * (rho[i] - p[i]));
      total += p[i];
    }
    res.duals.mu = std::max(
        0.0, res.duals.mu + res.duals.step_alpha2 * (total - budget));

    const double ee_new = ratio(p);
    double primal = std::max(0.0, total - budget);
    for (std::size_t i : opt) {
      primal = std::max({primal, rho[i] - p[i], p[i] - upper[i]});
    }
    double dual_res = 0.0;
    for (std::size_t i : opt) {
      const double grad = utility_gradient(slope[i], p[i]) - ee_new;
      const double projected =
          p[i] - std::clamp(p[i] + grad, rho[i], upper[i]);
      dual_res = std::max(dual_res, std::abs(projected));
    }
    res.trace.push_back({ee_new, primal, dual_res});

    const bool slack_ok = [&] {
      double cs = 0.0;
      for (std::size_t i : opt) {
        cs = std::max(cs, std::abs(res.duals.lambda[i] * (rho[i] - p[i])));
      }
      cs = std::max(cs, std::abs(res.duals.mu * (total - budget)));
      res.complementary_slackness = cs;
      return cs < 1e-6;
    }();

    const bool done = std::abs(ee_new - ee) < opts.tol && primal < 1e-9 &&
                      slack_ok && it > 0;
    ee = ee_new;
    if (done) {
      res.converged = true;
      ++it;
      break;
    }
  }

  res.iterations = it;
  for (std::size_t i : opt) res.powers[i] = p[i];
  for (std::size_t i = 0; i < n; ++i) {
    res.rates[i] = rate_from_slope(slope[i], res.powers[i], phy);
  }
  res.ee_value = ee;
  double sum_c = 0.0, sum_p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_c += res.rates[i];
    sum_p += res.powers[i];
  }
  res.cf_db = sum_p > 0.0 ? 10.0 * std::log10(sum_c / sum_p) : 0.0;
  return res;
}

}  // namespace owc
