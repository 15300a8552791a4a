#include <doctest.h>

#include "owcsim/config.hpp"
#include "owcsim/errors.hpp"

using namespace owc;

TEST_CASE("empty file yields the full default configuration") {
  const ScenarioConfig cfg = parse_scenario_string("");
  // Reference simulation parameters.
  CHECK(cfg.h_tx == 2.0);
  CHECK(cfg.vcsel.beam_waist_w0 == 5e-6);
  CHECK(cfg.vcsel.wavelength_lambda == 1550e-9);
  CHECK(cfg.vcsel.emit_power_pout == 50e-3);
  CHECK(cfg.array_side == 5);
  CHECK(cfg.rin_db_hz == -155.0);
  CHECK(cfg.lens_index == 1.55);
  CHECK(cfg.receiver_index == 1.77);
  CHECK(cfg.responsivity == 0.7);
  CHECK(cfg.n_pd == 5);
  CHECK(cfg.fov_deg == 30.0);
  CHECK(cfg.noise_figure_db == 5.0);
  CHECK(cfg.ofdm.bandwidth_b == 1.5e9);
  CHECK(cfg.target_ber == 1e-3);
  CHECK(cfg.room_dims.x == 5.0);
  CHECK(cfg.room_dims.y == 5.0);
  CHECK(cfg.room_dims.z == 3.0);
  CHECK(cfg.users_initial == 12);
  CHECK(cfg.ap_grid_x * cfg.ap_grid_y == 8);
  CHECK(cfg.classes.size() == 3);
  // The AP budget implied by Table-style defaults: 25 x 50 mW.
  CHECK(cfg.ap_budget() == doctest::Approx(1.25));
}

TEST_CASE("defaults pass full validation including coverage and eye safety") {
  ScenarioConfig cfg = default_config();
  CHECK_NOTHROW(cfg.validate());
  // Per-VCSEL power sits at or below the eye-safe cap.
  EyeSafetyParams eye{cfg.mpe, cfg.pupil_radius, cfg.resolved_mhp()};
  CHECK(cfg.vcsel.emit_power_pout <= eye_safe_power(eye, cfg.vcsel));
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS((void)parse_scenario_string("[harness]\nslot_tau = -1\n"),
                  Error);
  CHECK_THROWS_AS((void)parse_scenario_string("[harness]\nscheme = \"bogus\"\n"),
                  Error);
  CHECK_THROWS_AS((void)parse_scenario_string("[ofdm]\nfft_size = 48\n"), Error);
}

TEST_CASE("unknown keys and sections are hard errors") {
  CHECK_THROWS_AS((void)parse_scenario_string("[harness]\nnot_a_key = 1\n"),
                  Error);
  CHECK_THROWS_AS((void)parse_scenario_string("[nonsense]\nx = 1\n"), Error);
  try {
    (void)parse_scenario_string("[harness]\nslots = 5\nbogus = 2\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(e.code() == ErrorCode::config_invalid);
  }
}

TEST_CASE("round trip: emit, reparse, compare") {
  ScenarioConfig cfg = default_config();
  cfg.seed = 77;
  cfg.slot_tau = 60.0;
  cfg.scheme = "pdp-upa";
  cfg.classes[1].arrival_rate = 0.123;
  const std::string text = cfg.canonical_toml();
  const ScenarioConfig back = parse_scenario_string(text);
  CHECK(back.canonical_toml() == text);
  CHECK(back.config_hash() == cfg.config_hash());
  CHECK(back.seed == 77);
  CHECK(back.slot_tau == 60.0);
  CHECK(back.classes[1].arrival_rate == 0.123);
}

TEST_CASE("overrides apply and eye safety rejects hot emitters") {
  const ScenarioConfig cfg = parse_scenario_string(
      "[transmitter]\nper_vcsel_power = 0.049\n[harness]\nseed = 5\n");
  CHECK(cfg.vcsel.emit_power_pout == 0.049);
  CHECK(cfg.seed == 5);
  CHECK_THROWS_AS(
      (void)parse_scenario_string("[transmitter]\nper_vcsel_power = 0.2\n"),
      Error);
}

TEST_CASE("derived geometry") {
  const ScenarioConfig cfg = default_config();
  const auto aps = cfg.ap_positions();
  REQUIRE(aps.size() == 8);
  for (const auto& p : aps) {
    CHECK(p.z == 3.0);
    CHECK(p.x > 0.0);
    CHECK(p.x < 5.0);
  }
  CHECK(cfg.rx_height() == doctest::Approx(1.0));
  // CPC gain from the receiver index and the 30 degree acceptance angle.
  CHECK(cfg.concentrator_gain() ==
        doctest::Approx(1.77 * 1.77 / 0.25).epsilon(1e-9));
  const auto beam = cfg.beam();
  CHECK(beam.new_waist_wd > 0.0);
  CHECK(beam.waist_location_d2 > 0.0);
}
