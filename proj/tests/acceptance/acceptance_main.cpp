// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails. Expected wall time is a few minutes; the
// statistical criteria use 100 matched seeds with one-sided sign tests.

#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "owcsim/harness.hpp"
#include "owcsim/kernels/kernels.hpp"

using namespace owc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double sign_test_p(int wins, int n) {
  if (n <= 0) return 1.0;
  double p = 0.0;
  const double log_half = std::log(0.5);
  for (int k = wins; k <= n; ++k) {
    double log_c = 0.0;
    for (int j = 0; j < k; ++j) {
      log_c += std::log(double(n - j)) - std::log(double(j + 1));
    }
    p += std::exp(log_c + n * log_half);
  }
  return std::min(1.0, p);
}

struct PairTest {
  std::string name;
  int wins = 0;
  int n = 0;
  double p() const { return sign_test_p(wins, n); }
  bool pass() const { return p() < 0.05; }
};

// ---------------------------------------------------------------------------
// Criterion 1: transient PMF vs Monte-Carlo, and quantile coverage.
Outcome criterion1() {
  Rng rng(20250809);
  double worst_tv = 0.0;
  for (int n_now : {0, 5, 20}) {
    for (double p : {0.1, 0.5, 0.9}) {
      for (double mean : {0.1, 1.0, 10.0}) {
        const auto pmf = transient_pmf(n_now, p, mean);
        std::vector<double> hist;
        const int samples = 1000000;
        for (int s = 0; s < samples; ++s) {
          std::uint64_t k = rng.poisson(mean);
          for (int b = 0; b < n_now; ++b) k += rng.bernoulli(p) ? 1 : 0;
          if (k >= hist.size()) hist.resize(k + 1, 0.0);
          hist[k] += 1.0;
        }
        double tv = 0.0;
        const std::size_t top = std::max(pmf.size(), hist.size());
        for (std::size_t k = 0; k < top; ++k) {
          const double a = k < pmf.size() ? pmf[k] : 0.0;
          const double b = k < hist.size() ? hist[k] / samples : 0.0;
          tv += std::abs(a - b);
        }
        worst_tv = std::max(worst_tv, 0.5 * tv);
      }
    }
  }
  if (worst_tv >= 0.01) {
    return {false, "worst TV distance " + std::to_string(worst_tv)};
  }

  // Quantile coverage over 1e4 stationary slots at epsilon 0.05 and 0.1.
  ServiceClass cls;
  cls.mean_session = 90.0;
  cls.shape_omega = 2.0;
  const double tr = 120.0, mu = 0.1, tau = 30.0;
  std::string detail = "worst TV " + std::to_string(worst_tv);
  for (double eps : {0.05, 0.1}) {
    Rng r2(7 + int(eps * 100));
    std::vector<double> remaining;
    auto draw_holding = [&]() {
      const double w1 = cls.shape_omega / (cls.shape_omega + 1.0);
      const double rate1 = 1.0 / tr + cls.shape_omega / cls.mean_session;
      const double rate2 =
          1.0 / tr + 1.0 / (cls.shape_omega * cls.mean_session);
      return r2.uniform() < w1 ? r2.exponential(1.0 / rate1)
                               : r2.exponential(1.0 / rate2);
    };
    auto step = [&](double dt) {
      for (auto& t : remaining) t -= dt;
      std::erase_if(remaining, [](double t) { return t <= 0.0; });
      double at = r2.exponential(1.0 / mu);
      while (at <= dt) {
        const double left = draw_holding() - (dt - at);
        if (left > 0.0) remaining.push_back(left);
        at += r2.exponential(1.0 / mu);
      }
    };
    for (int i = 0; i < 300; ++i) step(tau);
    PredictorParams params{eps, tau, 1e-12};
    int violations = 0;
    const int slots = 10000;
    for (int s = 0; s < slots; ++s) {
      ObservationWindow w;
      w.timestamps = {1.0};
      w.counts = {int(remaining.size())};
      w.arrivals_seen = int(std::lround(mu * 10.0 * tau));
      w.window_span = 10.0 * tau;
      const auto f = predict_slot(w, params, cls, tr);
      step(tau);
      if (int(remaining.size()) > f.n_tilde) ++violations;
    }
    const double rate = double(violations) / slots;
    detail += ", coverage(eps=" + std::to_string(eps) + ")=" +
              std::to_string(rate);
    if (rate > eps + 0.02) return {false, detail};
  }
  return {true, detail};
}

// Criterion 2: the worked quantile example, exact.
Outcome criterion2() {
  const auto pmf = transient_pmf(2, 0.5, 1.0);
  const int n_tilde = forecast_quantile(pmf, 0.05);
  double cdf4 = 0.0;
  for (int k = 0; k <= 4 && k < int(pmf.size()); ++k) cdf4 += pmf[std::size_t(k)];
  std::ostringstream os;
  os << "N~ = " << n_tilde << ", CDF(4) = " << cdf4;
  return {n_tilde == 4 && std::abs(cdf4 - 0.9696) < 5e-4, os.str()};
}

// Criterion 3: closed forms vs quadrature.
Outcome criterion3() {
  auto simpson = [](const std::function<double(double)>& f, double a, double b,
                    int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  Rng rng(333);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double tr = rng.uniform(20.0, 400.0);
    const double td = rng.uniform(20.0, 400.0);
    const double omega = 1.0 + rng.uniform(0.0, 5.0);
    const double tau = rng.uniform(0.0, 150.0);
    const double r2 = 1.0 / tr + 1.0 / (omega * td);
    const double t_max = tau + 45.0 / r2;
    const double mean_quad = simpson(
        [&](double t) { return t * holding_time_pdf(t, tr, td, omega); }, 0.0,
        t_max, 40000);
    const double e_th = mean_holding_time(tr, td, omega);
    worst = std::max(worst, std::abs(e_th - mean_quad) / e_th);
    const double p_quad =
        simpson(
            [&](double s) { return 1.0 - holding_time_cdf(s, tr, td, omega); },
            tau, t_max, 40000) /
        e_th;
    const double p_closed = persistence_prob(tau, tr, td, omega);
    worst = std::max(worst, std::abs(p_closed - p_quad) /
                                std::max(1e-12, std::abs(p_quad)));
  }
  if (worst >= 1e-6) {
    return {false, "worst relative error " + std::to_string(worst)};
  }
  // omega = 1 exponential specialization to 1e-9.
  double worst_exp = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double tr = rng.uniform(20.0, 400.0);
    const double td = rng.uniform(20.0, 400.0);
    const double tau = rng.uniform(0.0, 300.0);
    const double e = mean_holding_time(tr, td, 1.0);
    worst_exp = std::max(worst_exp,
                         std::abs(persistence_prob(tau, tr, td, 1.0) -
                                  std::exp(-tau / e)) /
                             std::exp(-tau / e));
  }
  std::ostringstream os;
  os << "quadrature err " << worst << ", omega=1 err " << worst_exp;
  return {worst < 1e-6 && worst_exp < 1e-9, os.str()};
}

// Criterion 4: optimizer vs exhaustive grid search; KKT certificates.
Outcome criterion4() {
  PhyContext base;
  base.ofdm.fft_size_m = 64;
  base.link.target_ber = 1e-3;
  base.link.sinr_gap_gamma = sinr_gap(1e-3);
  base.responsivity = 0.7;

  Rng rng(4444);
  double worst_gap = 0.0, worst_kkt = 0.0, worst_cs = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    PhyContext phy = base;
    const bool interior = trial % 2 == 0;
    phy.ofdm.bandwidth_b = interior ? rng.uniform(1.0, 40.0) : 1.5e9;
    phy.noise = NoiseModel::from_psd(interior ? 1e-4 : 1.2e-21,
                                     phy.ofdm.bandwidth_b, -155.0, 5.0);
    const int n = 1 + int(rng.uniform_index(3));
    std::vector<OptUserInput> users;
    double rho_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      OptUserInput u;
      u.gain = rng.uniform(10.0, 200.0);
      u.interference = rng.uniform(0.0, 1.0);
      u.p_min = 1e-3;
      u.rho = rng.uniform(1e-3, 0.1);
      u.p_max = u.rho + rng.uniform(0.05, 0.6);
      rho_sum += u.rho;
      users.push_back(u);
    }
    const double budget = rho_sum + rng.uniform(0.05, 1.0);
    OptimizerOptions opts;
    opts.tol = 1e-9;
    opts.max_iter = 2000;
    const auto res = optimize_ap(users, phy, budget, opts);

    auto lnrate = [&](std::size_t i, double p) {
      return std::log(user_rate(p, users[i].gain, phy.responsivity,
                                users[i].interference, phy.link, phy.ofdm,
                                phy.noise));
    };
    // 200-point-per-user exhaustive search; per-user tables first.
    const int pts = 200;
    std::vector<std::vector<double>> val(users.size());
    std::vector<std::vector<double>> grid(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
      for (int g = 0; g < pts; ++g) {
        const double p =
            users[i].rho + (users[i].p_max - users[i].rho) * g / (pts - 1);
        grid[i].push_back(p);
        val[i].push_back(lnrate(i, p));
      }
    }
    double best = -1e300;
    std::vector<int> idx(users.size(), 0);
    while (true) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < users.size(); ++i) {
        num += val[i][std::size_t(idx[i])];
        den += grid[i][std::size_t(idx[i])];
      }
      if (den <= budget) best = std::max(best, num / den);
      std::size_t carry = 0;
      while (carry < idx.size()) {
        if (++idx[carry] < pts) break;
        idx[carry] = 0;
        ++carry;
      }
      if (carry == idx.size()) break;
    }
    worst_gap = std::max(worst_gap, (best - res.ee_value) / std::abs(best));
    if (!res.trace.empty()) {
      // Projected-gradient (stationarity) residual and slackness at return.
      worst_kkt = std::max(worst_kkt, res.trace.back().dual_residual);
    }
    worst_cs = std::max(worst_cs, res.complementary_slackness);
  }
  std::ostringstream os;
  os << "worst EE gap " << worst_gap << ", KKT residual " << worst_kkt
     << ", slackness " << worst_cs;
  return {worst_gap < 1e-3 && worst_kkt < 1e-6 && worst_cs < 1e-6, os.str()};
}

// Criterion 5: constraint feasibility across schemes and seeds.
Outcome criterion5() {
  for (const char* scheme : {"baseline", "pdp-upa", "pdp-opa"}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      ScenarioConfig cfg = default_config();
      cfg.scheme = scheme;
      cfg.seed = seed;
      cfg.slots_total = 20;
      cfg.users_initial = 12;
      Simulation sim(cfg);
      for (int s = 0; s < cfg.slots_total; ++s) {
        sim.run_slot();
        std::vector<double> spend(8, 0.0);
        for (const auto& u : sim.users()) {
          if (!u.serving_ap) continue;  // sum_a S <= 1 by construction
          const auto& k = cfg.classes[std::size_t(u.class_id)];
          if (*u.serving_ap < 0 || *u.serving_ap >= 8) {
            return {false, "association index out of range"};
          }
          if (u.allocated_power < 0.0 ||
              u.allocated_power > k.p_max + 1e-9) {
            return {false, "per-user power bound violated"};
          }
          if (u.allocated_power > 0.0 &&
              u.allocated_power < k.p_min - 1e-9) {
            return {false, "per-user power below P_min"};
          }
          spend[std::size_t(*u.serving_ap)] += u.allocated_power;
        }
        for (double v : spend) {
          if (v > cfg.ap_budget() + 1e-9) {
            return {false, "per-AP budget exceeded: " + std::to_string(v)};
          }
        }
      }
    }
  }
  return {true, "Eqs. association/power/budget bounds hold over 3 schemes x 3 seeds x 20 slots"};
}

// Criterion 6: PHY loopback, BER bound over the pinned grid, QAM ordering.
Outcome criterion6() {
  Rng rng(606);
  OfdmParams p;
  for (int m : {16, 64, 256}) {
    p.fft_size_m = m;
    for (int f : {4, 16}) {
      const std::size_t nbits =
          std::size_t(p.data_subcarriers()) * std::size_t(std::log2(f));
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::uint8_t> bits(nbits);
        for (auto& b : bits) b = std::uint8_t(rng.next_u64() & 1u);
        const auto tx = modulate_frame(bits, f, p, 1.7);
        if (demodulate_frame(tx.samples, p, f, 1.7) != bits) {
          return {false, "noiseless round trip failed"};
        }
      }
    }
  }
  p.fft_size_m = 64;
  // Pinned acceptance grid: 8..30 dB. The printed bound is an approximation
  // that provably sits below the true QAM BER for BER above roughly 0.1
  // (sub-8 dB here), so the grid is pinned to the bound's validity region,
  // which is also where the reference BER figures operate.
  std::vector<double> grid;
  for (double s = 8.0; s <= 30.0; s += 2.0) grid.push_back(s);
  std::vector<BerCurveUser> users{{1.0, 1.0}};
  std::ostringstream os;
  std::vector<double> ber4, ber16;
  for (int f : {4, 16}) {
    const std::size_t bits_per_frame =
        std::size_t(p.data_subcarriers()) * std::size_t(std::log2(f));
    const int frames = int(1000000 / bits_per_frame) + 1;
    const auto curve = simulate_ber_curve(users, f, grid, frames, p, 60601);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i].bits < 1000000) return {false, "insufficient bits"};
      const double bound =
          ber_upper_bound(std::pow(10.0, grid[i] / 10.0), f);
      (f == 4 ? ber4 : ber16).push_back(curve[i].ber);
      if (curve[i].ber > bound) {
        os << "F=" << f << " at " << grid[i] << " dB: " << curve[i].ber
           << " > bound " << bound;
        return {false, os.str()};
      }
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (ber4[i] > ber16[i]) {
      return {false, "4-QAM BER above 16-QAM BER at a grid point"};
    }
  }
  os << "round trips exact; bound holds on 8-30 dB at 1e6 bits/point";
  return {true, os.str()};
}

// Criterion 7: trend suite as one-sided sign tests over 100 matched seeds.
Outcome criterion7(std::vector<PairTest>& tests) {
  const int seeds = 100;
  auto base_cfg = [] {
    ScenarioConfig cfg = default_config();
    cfg.slots_total = 24;
    cfg.warmup_slots = 8;
    cfg.users_initial = 12;
    return cfg;
  };

  struct Key {
    double mu, tau;
    Scheme scheme;
  };
  std::vector<Key> wanted;
  for (double mu : {0.6, 1.4}) wanted.push_back({mu, 30.0, Scheme::pdp_opa});
  wanted.push_back({1.0, 60.0, Scheme::pdp_opa});
  wanted.push_back({1.0, 30.0, Scheme::pdp_opa});
  wanted.push_back({1.0, 30.0, Scheme::pdp_upa});
  wanted.push_back({1.0, 30.0, Scheme::baseline});

  // results[k][seed]
  std::vector<std::vector<RunResult>> results(wanted.size());
  for (auto& v : results) v.resize(std::size_t(seeds));
  std::atomic<int> cursor{0};
  const int total = int(wanted.size()) * seeds;
  auto worker = [&] {
    while (true) {
      const int i = cursor.fetch_add(1);
      if (i >= total) break;
      const int k = i / seeds, s = i % seeds;
      ScenarioConfig cfg = base_cfg();
      cfg.arrival_scale = wanted[std::size_t(k)].mu;
      cfg.slot_tau = wanted[std::size_t(k)].tau;
      cfg.scheme = to_string(wanted[std::size_t(k)].scheme);
      cfg.seed = std::uint64_t(1000 + s);
      results[std::size_t(k)][std::size_t(s)] = run_scenario(cfg);
    }
  };
  {
    const int jobs = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const auto& mu_low = results[0];
  const auto& mu_high = results[1];
  const auto& tau_long = results[2];
  const auto& opa = results[3];
  const auto& upa = results[4];
  const auto& baseline = results[5];

  auto add = [&](const std::string& name, auto&& better) {
    PairTest t;
    t.name = name;
    for (int s = 0; s < seeds; ++s) {
      const int b = better(s);
      if (b > 0) ++t.wins;
      if (b != 0) ++t.n;
    }
    tests.push_back(t);
  };

  add("EE decreases in mu", [&](int s) {
    const double d = mu_low[std::size_t(s)].mean_cf_db -
                     mu_high[std::size_t(s)].mean_cf_db;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("EE decreases in tau", [&](int s) {
    const double d = opa[std::size_t(s)].mean_cf_db -
                     tau_long[std::size_t(s)].mean_cf_db;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("prediction loss increases in tau", [&](int s) {
    const double d = tau_long[std::size_t(s)].mean_prediction_loss -
                     opa[std::size_t(s)].mean_prediction_loss;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("prediction loss increases in mu", [&](int s) {
    const double d = mu_high[std::size_t(s)].mean_prediction_loss -
                     mu_low[std::size_t(s)].mean_prediction_loss;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("fewer optimizer iterations at tau=0.5 min", [&](int s) {
    const double d = tau_long[std::size_t(s)].mean_optimizer_iters -
                     opa[std::size_t(s)].mean_optimizer_iters;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("EE ordering PDP-OPA >= PDP-UPA", [&](int s) {
    const double d = opa[std::size_t(s)].mean_cf_db -
                     upa[std::size_t(s)].mean_cf_db;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("EE ordering PDP-UPA >= Baseline", [&](int s) {
    const double d = upa[std::size_t(s)].mean_cf_db -
                     baseline[std::size_t(s)].mean_cf_db;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("sum-rate ordering PDP-OPA >= PDP-UPA", [&](int s) {
    const double d = opa[std::size_t(s)].mean_sum_rate -
                     upa[std::size_t(s)].mean_sum_rate;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("sum-rate ordering PDP-UPA >= Baseline", [&](int s) {
    const double d = upa[std::size_t(s)].mean_sum_rate -
                     baseline[std::size_t(s)].mean_sum_rate;
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  });
  add("video degrades more than voice across the mu sweep", [&](int s) {
    const auto& lo = mu_low[std::size_t(s)];
    const auto& hi = mu_high[std::size_t(s)];
    const double video = lo.mean_class_cf_db[0] - hi.mean_class_cf_db[0];
    const double voice = lo.mean_class_cf_db[2] - hi.mean_class_cf_db[2];
    return video > voice ? 1 : (video < voice ? -1 : 0);
  });

  bool all = true;
  std::ostringstream os;
  for (const auto& t : tests) {
    if (!t.pass()) all = false;
    os << t.name << " wins " << t.wins << "/" << t.n << " p=" << t.p() << "; ";
  }
  return {all, os.str()};
}

// Criterion 8: byte-identical artifacts for identical config+seed.
Outcome criterion8() {
  namespace fs = std::filesystem;
  const fs::path tmp =
      fs::temp_directory_path() / ("owcsim_accept_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  std::ofstream(tmp / "c.toml")
      << "[harness]\nslots = 8\nusers_initial = 10\nseed = 42\n"
         "scheme = \"pdp-opa\"\ndump_forecasts = true\n";
  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(OWCSIM_CLI_PATH) + " --config " +
                            (tmp / "c.toml").string() + " --out " +
                            (tmp / out).string() + " run > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (run("a") != 0 || run("b") != 0) return {false, "cli run failed"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const bool metrics_same =
      slurp(tmp / "a" / "metrics.csv") == slurp(tmp / "b" / "metrics.csv");
  const bool forecasts_same =
      slurp(tmp / "a" / "forecasts.csv") == slurp(tmp / "b" / "forecasts.csv");
  const bool nonempty = !slurp(tmp / "a" / "metrics.csv").empty();
  std::error_code ec;
  fs::remove_all(tmp, ec);
  return {metrics_same && forecasts_same && nonempty,
          "metrics.csv and forecasts.csv byte-identical across two runs"};
}

// Criterion 9: optics identities.
Outcome criterion9() {
  std::ostringstream os;
  const double gamma = sinr_gap(1e-3);
  if (std::abs(gamma - 3.5325) > 1e-3) {
    return {false, "Gamma(1e-3) = " + std::to_string(gamma)};
  }
  const double frac = enclosed_power(1.0, 0.37, 0.37);
  if (std::abs(frac - (1.0 - std::exp(-2.0))) > 1e-12) {
    return {false, "enclosed fraction at r0 = w mismatch"};
  }
  // Lens transform against the q-parameter oracle.
  Rng rng(909);
  VcselParams v{5e-6, 1550e-9, 1.0, 50e-3};
  for (int i = 0; i < 200; ++i) {
    LensParams l{rng.uniform(0.5e-3, 10e-3), rng.uniform(0.0, 30e-3)};
    const TransformedBeam tb = lens_transform(v, l);
    const double zr = M_PI * v.beam_waist_w0 * v.beam_waist_w0 /
                      v.wavelength_lambda;
    const double a = l.vcsel_to_lens_d1, b = zr;
    const double n2 = a * a + b * b;
    const double inv_re = a / n2 - 1.0 / l.focal_length_f;
    const double inv_im = -b / n2;
    const double m2 = inv_re * inv_re + inv_im * inv_im;
    const double d2 = -inv_re / m2;
    const double zr2 = inv_im / m2 * -1.0;
    const double wd = std::sqrt(v.wavelength_lambda * zr2 / M_PI);
    if (std::abs(tb.waist_location_d2 - d2) > 1e-9 * std::abs(d2) ||
        std::abs(tb.new_waist_wd - wd) > 1e-9 * wd) {
      return {false, "lens transform deviates from the ABCD oracle"};
    }
  }
  // Aggregate gain equals brute force exactly under the scalar kernel.
  const auto prev = kernels::active_backend();
  kernels::force_backend(kernels::Backend::scalar);
  ScenarioConfig cfg = default_config();
  const TransformedBeam beam = cfg.beam();
  bool exact = true;
  for (int trial = 0; trial < 10 && exact; ++trial) {
    const ApGeometry ap = cfg.ap_geometry(trial % 8);
    const ReceiverGeometry rx = cfg.receiver_at(
        {rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0), cfg.rx_height()});
    double brute = 0.0;
    for (int pd = 0; pd < rx.pd_count(); ++pd) {
      for (int e = 0; e < ap.element_count(); ++e) {
        brute += element_channel_gain(ap, e, rx, pd, beam);
      }
    }
    const double agg = aggregate_gain(ap, rx, beam);
    exact = std::abs(agg - brute) <= 1e-15 * std::max(1.0, std::abs(brute));
  }
  kernels::force_backend(prev);
  if (!exact) return {false, "aggregate gain != brute-force double sum"};
  os << "Gamma " << gamma << "; enclosure, ABCD oracle, double-sum identities hold";
  return {true, os.str()};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int n, const char* title, const Outcome& o, double secs) {
    std::printf("[%s] criterion %d: %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL",
                n, title, secs, o.detail.c_str());
    if (!o.pass) ++failures;
  };

  auto timed = [&](auto&& fn) {
    const auto t0 = Clock::now();
    Outcome o = fn();
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    return std::pair<Outcome, double>(o, secs);
  };

  {
    auto [o, s] = timed(criterion1);
    report(1, "predictor vs Monte-Carlo oracle and quantile coverage", o, s);
  }
  {
    auto [o, s] = timed(criterion2);
    report(2, "worked quantile example Binomial(2,0.5)+Poisson(1)", o, s);
  }
  {
    auto [o, s] = timed(criterion3);
    report(3, "closed forms vs quadrature for p_tau and E[Th]", o, s);
  }
  {
    auto [o, s] = timed(criterion4);
    report(4, "optimizer optimality vs exhaustive grid search + KKT", o, s);
  }
  {
    auto [o, s] = timed(criterion5);
    report(5, "constraint feasibility in every accepted run", o, s);
  }
  {
    auto [o, s] = timed(criterion6);
    report(6, "PHY loopback and BER bound", o, s);
  }
  {
    std::vector<PairTest> tests;
    const auto t0 = Clock::now();
    Outcome o = criterion7(tests);
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    for (const auto& t : tests) {
      std::printf("    [%s] trend: %s (wins %d/%d, p=%.4f)\n",
                  t.pass() ? "ok" : "FAIL", t.name.c_str(), t.wins, t.n, t.p());
    }
    report(7, "trend suite (sign tests, 100 matched seeds)", o, secs);
  }
  {
    auto [o, s] = timed(criterion8);
    report(8, "determinism: byte-identical outputs", o, s);
  }
  {
    auto [o, s] = timed(criterion9);
    report(9, "optics identities", o, s);
  }

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS",
              failures);
  return failures ? 1 : 0;
}
