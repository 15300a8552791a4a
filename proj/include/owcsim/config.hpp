#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owcsim/beam.hpp"
#include "owcsim/channel.hpp"
#include "owcsim/ofdm.hpp"
#include "owcsim/optimizer.hpp"
#include "owcsim/traffic.hpp"

namespace owc {

enum class Scheme { baseline, pdp_upa, pdp_opa };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Full scenario description. Every field has a default; the stock values
// reproduce the reference setup (5x5x3 m room, 8 ceiling APs, 12 users,
// 5x5 VCSEL arrays at 50 mW, 1550 nm, ADR with 5 PDs, 30 deg FOV, 0.7 A/W,
// 1.5 GHz, RIN -155 dB/Hz, noise figure 5 dB, pre-FEC BER 1e-3).
struct ScenarioConfig {
  // [room]
  Vec3 room_dims{5.0, 5.0, 3.0};

  // [transmitter]
  double h_tx = 2.0;  // m, vertical separation between AP and receiver plane
  VcselParams vcsel;  // w0 = 5 um, lambda = 1550 nm, n = 1, 50 mW
  int array_side = 5;
  double element_pitch = 300e-6;  // m

  // [lens]
  LensParams lens{1.5e-3, 16.7e-3};
  double lens_index = 1.55;

  // [eye_safety] mhp_distance <= 0 resolves to the transformed-beam waist.
  double mpe = 1300.0;
  double pupil_radius = 3.5e-3;
  double mhp_distance = -1.0;

  // [receiver]
  int n_pd = 5;
  double responsivity = 0.7;
  double fov_deg = 30.0;
  double pd_tilt_deg = 60.0;
  double active_area_fraction = 0.35;
  double receiver_index = 1.77;

  // [ofdm]
  OfdmParams ofdm;

  // [noise]
  double noise_figure_db = 5.0;
  double rin_db_hz = -155.0;
  double load_ohm = 50.0;
  double temperature_k = 290.0;
  double ref_photocurrent_a = 7e-4;
  double psd_nt_override = 0.0;  // > 0 replaces the composed PSD

  // [phy]
  double target_ber = 1e-3;
  std::string interference_model = "literal";  // literal | gain_weighted

  // [classes.*]
  std::vector<ServiceClass> classes;

  // [mobility]
  double speed_min = 0.05, speed_max = 0.3;
  double pause_min = 15.0, pause_max = 45.0;
  double mean_residence = 120.0;

  // [predictor]
  double epsilon = 0.05;
  double obs_interval = 1.0;
  int window_slots = 10;
  double pmf_tail_cutoff = 1e-12;

  // [optimizer]
  double opt_tol = 1e-6;
  int opt_max_iter = 500;
  double opt_step_scale = 0.1;
  double opt_damping = 0.5;
  int opt_inner_sweeps = 10;
  int interference_sweeps = 2;   // minimum Jacobi passes per boundary
  int max_interference_sweeps = 8;  // adaptive continuation limit
  int alternations = 1;

  // [harness]
  int slots_total = 60;
  double slot_tau = 30.0;  // s; also the prediction horizon
  int warmup_slots = 10;
  int users_initial = 12;
  std::string scheme = "pdp-opa";
  std::uint64_t seed = 1;
  double arrival_scale = 1.0;  // dimensionless load multiplier
  int ap_grid_x = 4;
  int ap_grid_y = 2;
  bool dump_snapshots = false;
  bool dump_alloc = false;
  bool dump_forecasts = false;

  // [sweep]
  std::vector<double> mu_values{0.6, 1.0, 1.4};
  std::vector<double> tau_values{30.0, 60.0};
  std::vector<double> snr_grid_db{8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
  int ber_frames = 2000;

  // Derived pieces.
  double rx_height() const { return room_dims.z - h_tx; }
  double fov_rad() const;
  double concentrator_gain() const;  // (n_rec / sin(theta_acc))^2
  std::vector<Vec3> ap_positions() const;
  TransformedBeam beam() const;
  ReceiverGeometry receiver_at(const Vec3& pos) const;
  ApGeometry ap_geometry(int ap_index) const;
  NoiseModel noise_model() const;
  QamLink qam_link() const;
  PhyContext phy_context() const;
  MobilityConfig mobility_config() const;
  Scheme scheme_enum() const { return scheme_from_string(scheme); }
  double resolved_mhp() const;
  double ap_budget() const { return ap_geometry(0).total_power(); }

  // Full validation, including the eye-safety cap on per-VCSEL power and the
  // receiver-plane coverage check.
  void validate() const;

  // Canonical serialization (stable ordering), reparseable by parse_string.
  std::string canonical_toml() const;
  std::uint64_t config_hash() const;
};

ScenarioConfig default_config();

// Strict TOML-subset parser: [sections], key = value with numbers, booleans,
// "strings" and flat arrays. Unknown sections or keys are hard errors with
// line diagnostics. An empty document yields the full default config.
ScenarioConfig parse_scenario_string(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

}  // namespace owc
