// owcsim command-line entry point.
//
// Subcommands:
//   run          simulate one scenario, write metrics.csv + aggregate.csv
//   sweep        run an axis sweep across all three schemes, write sweep.csv
//   validate     parse and check a scenario file, print the resolved config
//   ber-curve    Monte-Carlo BER curves for 4/16-QAM, write ber.csv
//   predict-demo stationary demand-prediction demo, write forecasts.csv
//
// Exit codes: 0 success, 2 config error, 3 runtime/IO failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "owcsim/errors.hpp"
#include "owcsim/harness.hpp"

namespace {

owc::ScenarioConfig load_config(const std::string& path,
                                std::int64_t seed_override,
                                const std::string& scheme_override) {
  owc::ScenarioConfig cfg = path.empty() ? owc::default_config()
                                         : owc::parse_scenario_file(path);
  if (seed_override >= 0) cfg.seed = std::uint64_t(seed_override);
  if (!scheme_override.empty()) cfg.scheme = scheme_override;
  cfg.validate();
  return cfg;
}

std::filesystem::path out_path(const std::string& dir, const char* name) {
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir) / name;
}

void print_run_summary(const owc::RunResult& r) {
  std::printf("%s: cf %.2f dB, sum rate %.3g bit/s, loss %.3f, unserved %.2f\n",
              r.config.scheme.c_str(), r.mean_cf_db, r.mean_sum_rate,
              r.mean_prediction_loss, r.mean_unserved);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"owcsim: dynamic indoor optical wireless network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed_override = -1;
  std::string scheme_override;
  int jobs = int(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  app.add_option("--config", config_path, "scenario file (TOML)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed_override, "master seed override");
  app.add_option("--scheme", scheme_override,
                 "scheme override: baseline|pdp-upa|pdp-opa");
  app.add_option("--jobs", jobs, "worker threads for sweeps");

  auto* cmd_run = app.add_subcommand("run", "simulate one scenario");
  auto* cmd_sweep = app.add_subcommand("sweep", "axis sweep across schemes");
  std::string axis = "mu";
  std::vector<double> values;
  cmd_sweep->add_option("--axis", axis, "mu|tau|snr|class");
  cmd_sweep->add_option("--values", values, "axis values (default from config)");
  auto* cmd_validate = app.add_subcommand("validate", "check a scenario file");
  auto* cmd_ber = app.add_subcommand("ber-curve", "Monte-Carlo BER curves");
  auto* cmd_demo = app.add_subcommand("predict-demo", "demand prediction demo");

  CLI11_PARSE(app, argc, argv);

  try {
    const owc::ScenarioConfig cfg =
        load_config(config_path, seed_override, scheme_override);

    if (cmd_validate->parsed()) {
      std::cout << cfg.canonical_toml();
      return 0;
    }

    if (cmd_run->parsed()) {
      const owc::RunResult r = owc::run_scenario(cfg);
      owc::write_metrics_csv(out_path(out_dir, "metrics.csv").string(), r);
      owc::write_aggregate_csv(out_path(out_dir, "aggregate.csv").string(), r);
      if (cfg.dump_forecasts) {
        owc::write_forecast_csv(out_path(out_dir, "forecasts.csv").string(), r);
      }
      if (cfg.dump_alloc) {
        owc::write_alloc_csv(out_path(out_dir, "alloc.csv").string(), r);
      }
      if (cfg.dump_snapshots) {
        owc::write_snapshots_csv(out_path(out_dir, "snapshots.csv").string(), r);
      }
      print_run_summary(r);
      return 0;
    }

    if (cmd_sweep->parsed()) {
      const owc::SweepAxis ax = owc::sweep_axis_from_string(axis);
      std::vector<double> vals = values;
      if (vals.empty()) {
        vals = ax == owc::SweepAxis::mu    ? cfg.mu_values
               : ax == owc::SweepAxis::tau ? cfg.tau_values
                                           : cfg.snr_grid_db;
      }
      const auto points = owc::sweep(cfg, ax, vals, jobs);
      owc::write_sweep_csv(out_path(out_dir, "sweep.csv").string(), cfg, ax,
                           points);
      for (const auto& p : points) {
        std::printf("%s=%g %s: cf %.2f dB, sum rate %.3g bit/s, loss %.3f\n",
                    axis.c_str(), p.value, owc::to_string(p.scheme),
                    p.result.mean_cf_db, p.result.mean_sum_rate,
                    p.result.mean_prediction_loss);
      }
      return 0;
    }

    if (cmd_ber->parsed()) {
      std::vector<std::tuple<std::string, int, owc::BerPoint>> rows;
      // Scheme allocations separate the curves: run a short scenario per
      // scheme and feed the final allocation into the Monte-Carlo.
      for (const char* scheme : {"baseline", "pdp-upa", "pdp-opa"}) {
        owc::ScenarioConfig c = cfg;
        c.scheme = scheme;
        c.slots_total = std::max(2, std::min(c.slots_total, 12));
        owc::Simulation sim(c);
        for (int s = 0; s < c.slots_total; ++s) sim.run_slot();
        std::vector<owc::BerCurveUser> users;
        const auto beam = c.beam();
        for (const auto& u : sim.users()) {
          if (!u.serving_ap || u.allocated_power <= 0.0) continue;
          owc::ApGeometry ap = c.ap_geometry(*u.serving_ap);
          const double g =
              owc::aggregate_gain(ap, c.receiver_at(u.position), beam);
          users.push_back({u.allocated_power, g});
        }
        if (users.empty()) users.push_back({1.0, 1.0});
        for (int f : {4, 16}) {
          const auto curve = owc::simulate_ber_curve(
              users, f, c.snr_grid_db, c.ber_frames, c.ofdm, c.seed);
          for (const auto& pt : curve) rows.emplace_back(scheme, f, pt);
        }
      }
      owc::write_ber_csv(out_path(out_dir, "ber.csv").string(), cfg, rows);
      std::printf("ber-curve: %zu points written\n", rows.size());
      return 0;
    }

    if (cmd_demo->parsed()) {
      owc::ScenarioConfig c = cfg;
      c.scheme = "pdp-opa";
      c.dump_forecasts = true;
      const owc::RunResult r = owc::run_scenario(c);
      owc::write_forecast_csv(out_path(out_dir, "forecasts.csv").string(), r);
      int violations = 0;
      for (const auto& f : r.forecast_rows) {
        if (f.actual > f.n_tilde) ++violations;
      }
      const double rate =
          r.forecast_rows.empty()
              ? 0.0
              : double(violations) / double(r.forecast_rows.size());
      std::printf("predict-demo: %zu forecasts, mean loss %.3f, "
                  "violation rate %.4f (epsilon %.3f)\n",
                  r.forecast_rows.size(), r.mean_prediction_loss, rate,
                  c.epsilon);
      return 0;
    }
  } catch (const owc::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", owc::to_string(e.code()), e.what());
    return e.code() == owc::ErrorCode::config_invalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
