#include "owcsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "owcsim/errors.hpp"

namespace owc {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::baseline: return "baseline";
    case Scheme::pdp_upa: return "pdp-upa";
    case Scheme::pdp_opa: return "pdp-opa";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "baseline") return Scheme::baseline;
  if (s == "pdp-upa") return Scheme::pdp_upa;
  if (s == "pdp-opa") return Scheme::pdp_opa;
  throw Error(ErrorCode::config_invalid, "unknown scheme '" + s + "'");
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  c.classes = {
      {0, "video", 1e9, 600.0, 4.0, 0.0525, 0.04, 0.5},
      {1, "web", 1e8, 120.0, 2.0, 0.075, 0.03, 0.3},
      {2, "voice", 1e7, 180.0, 1.0, 0.0556, 0.025, 0.2},
  };
  return c;
}

double ScenarioConfig::fov_rad() const { return fov_deg * M_PI / 180.0; }

double ScenarioConfig::concentrator_gain() const {
  const double s = std::sin(fov_rad());
  return receiver_index * receiver_index / (s * s);
}

std::vector<Vec3> ScenarioConfig::ap_positions() const {
  std::vector<Vec3> out;
  out.reserve(std::size_t(ap_grid_x) * ap_grid_y);
  for (int j = 0; j < ap_grid_y; ++j) {
    for (int i = 0; i < ap_grid_x; ++i) {
      out.push_back({(i + 0.5) * room_dims.x / ap_grid_x,
                     (j + 0.5) * room_dims.y / ap_grid_y, room_dims.z});
    }
  }
  return out;
}

TransformedBeam ScenarioConfig::beam() const { return lens_transform(vcsel, lens); }

ReceiverGeometry ScenarioConfig::receiver_at(const Vec3& pos) const {
  ReceiverGeometry rx;
  rx.position = pos;
  rx.pd_orientations = make_pd_orientations(n_pd, pd_tilt_deg * M_PI / 180.0);
  rx.active_area_fraction = active_area_fraction;
  rx.concentrator_gain = concentrator_gain();
  rx.acceptance_angle = fov_rad();
  rx.responsivity = responsivity;
  return rx;
}

ApGeometry ScenarioConfig::ap_geometry(int ap_index) const {
  ApGeometry ap;
  ap.position = ap_positions()[std::size_t(ap_index)];
  ap.array_side_lc = array_side;
  ap.per_vcsel_power = vcsel.emit_power_pout;
  ap.element_offsets = make_element_grid(array_side, element_pitch);
  return ap;
}

NoiseModel ScenarioConfig::noise_model() const {
  if (psd_nt_override > 0.0) {
    return NoiseModel::from_psd(psd_nt_override, ofdm.bandwidth_b, rin_db_hz,
                                noise_figure_db);
  }
  return NoiseModel::from_components(ofdm.bandwidth_b, noise_figure_db,
                                     rin_db_hz, load_ohm, temperature_k,
                                     ref_photocurrent_a);
}

QamLink ScenarioConfig::qam_link() const {
  QamLink link;
  link.target_ber = target_ber;
  link.sinr_gap_gamma = sinr_gap(target_ber);
  return link;
}

PhyContext ScenarioConfig::phy_context() const {
  return {ofdm, noise_model(), qam_link(), responsivity};
}

MobilityConfig ScenarioConfig::mobility_config() const {
  MobilityConfig m;
  m.room_dims = room_dims;
  m.rx_height = rx_height();
  m.speed_min = speed_min;
  m.speed_max = speed_max;
  m.pause_min = pause_min;
  m.pause_max = pause_max;
  m.mean_residence = mean_residence;
  return m;
}

double ScenarioConfig::resolved_mhp() const {
  return mhp_distance > 0.0 ? mhp_distance : beam().waist_location_d2;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::config_invalid, msg);
  };
  if (room_dims.x <= 0 || room_dims.y <= 0 || room_dims.z <= 0)
    fail("room.dims must be positive");
  if (h_tx <= 0 || h_tx >= room_dims.z)
    fail("transmitter.h_tx must lie inside the room height");
  vcsel.validate();
  lens.validate();
  ofdm.validate();
  if (array_side < 1) fail("transmitter.array_side must be >= 1");
  if (element_pitch < 0) fail("transmitter.element_pitch must be >= 0");
  if (n_pd < 1) fail("receiver.n_pd must be >= 1");
  if (fov_deg <= 0 || fov_deg > 90) fail("receiver.fov_deg outside (0, 90]");
  if (pd_tilt_deg < 0 || pd_tilt_deg >= 90)
    fail("receiver.pd_tilt_deg outside [0, 90)");
  if (active_area_fraction <= 0 || active_area_fraction > 1)
    fail("receiver.active_area_fraction outside (0, 1]");
  if (concentrator_gain() < 1) fail("receiver concentrator gain < 1");
  if (responsivity <= 0) fail("receiver.responsivity must be > 0");
  if (!(target_ber > 0 && target_ber < 0.2))
    fail("phy.target_ber outside (0, 0.2)");
  if (interference_model != "literal" && interference_model != "gain_weighted")
    fail("phy.interference_model must be literal or gain_weighted");
  if (classes.empty()) fail("at least one service class is required");
  for (const auto& k : classes) k.validate();
  mobility_config().validate();
  if (epsilon < 0 || epsilon > 1) fail("predictor.epsilon outside [0, 1]");
  if (obs_interval <= 0) fail("predictor.obs_interval must be > 0");
  if (window_slots < 1) fail("predictor.window_slots must be >= 1");
  if (pmf_tail_cutoff <= 0) fail("predictor.pmf_tail_cutoff must be > 0");
  if (opt_tol <= 0 || opt_max_iter < 1 || opt_inner_sweeps < 1)
    fail("optimizer parameters out of range");
  if (opt_damping < 0 || opt_damping >= 1)
    fail("optimizer.damping outside [0, 1)");
  if (interference_sweeps < 1 || max_interference_sweeps < interference_sweeps)
    fail("optimizer sweep counts out of range");
  if (alternations < 1) fail("optimizer.alternations must be >= 1");
  if (slots_total < 0) fail("harness.slots must be >= 0");
  if (slot_tau <= 0) fail("harness.slot_tau must be > 0");
  if (warmup_slots < 0) fail("harness.warmup_slots must be >= 0");
  if (users_initial < 0) fail("harness.users_initial must be >= 0");
  if (arrival_scale < 0) fail("harness.arrival_scale must be >= 0");
  if (ap_grid_x < 1 || ap_grid_y < 1) fail("harness.ap_grid must be >= 1x1");
  scheme_from_string(scheme);
  if (mu_values.empty() || tau_values.empty() || snr_grid_db.empty())
    fail("sweep axes must be non-empty");
  if (ber_frames < 1) fail("sweep.ber_frames must be >= 1");

  // Per-VCSEL power must respect the eye-safety cap.
  EyeSafetyParams eye{mpe, pupil_radius, resolved_mhp()};
  const double cap = eye_safe_power(eye, vcsel);
  if (vcsel.emit_power_pout > cap) {
    std::ostringstream os;
    os << "per-VCSEL power " << vcsel.emit_power_pout
       << " W exceeds the eye-safe cap " << cap << " W";
    fail(os.str());
  }

  // Coverage: every receiver-plane point must see a nonzero gain somewhere.
  const TransformedBeam tb = beam();
  const auto aps = ap_positions();
  for (int gy = 0; gy <= 20; ++gy) {
    for (int gx = 0; gx <= 20; ++gx) {
      const Vec3 pos{room_dims.x * gx / 20.0, room_dims.y * gy / 20.0,
                     rx_height()};
      const ReceiverGeometry rx = receiver_at(pos);
      double best = 0.0;
      for (int a = 0; a < int(aps.size()); ++a) {
        best = std::max(best, aggregate_gain(ap_geometry(a), rx, tb));
      }
      if (best <= 0.0) {
        std::ostringstream os;
        os << "coverage hole at (" << pos.x << ", " << pos.y << ")";
        fail(os.str());
      }
    }
  }
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

}  // namespace

std::string ScenarioConfig::canonical_toml() const {
  std::ostringstream os;
  os << "[room]\n";
  os << "dims = [" << fmt(room_dims.x) << ", " << fmt(room_dims.y) << ", "
     << fmt(room_dims.z) << "]\n";
  os << "\n[transmitter]\n";
  os << "h_tx = " << fmt(h_tx) << "\n";
  os << "beam_waist = " << fmt(vcsel.beam_waist_w0) << "\n";
  os << "wavelength = " << fmt(vcsel.wavelength_lambda) << "\n";
  os << "medium_index = " << fmt(vcsel.medium_index_n) << "\n";
  os << "per_vcsel_power = " << fmt(vcsel.emit_power_pout) << "\n";
  os << "array_side = " << array_side << "\n";
  os << "element_pitch = " << fmt(element_pitch) << "\n";
  os << "\n[lens]\n";
  os << "focal_length = " << fmt(lens.focal_length_f) << "\n";
  os << "vcsel_to_lens = " << fmt(lens.vcsel_to_lens_d1) << "\n";
  os << "index = " << fmt(lens_index) << "\n";
  os << "\n[eye_safety]\n";
  os << "mpe = " << fmt(mpe) << "\n";
  os << "pupil_radius = " << fmt(pupil_radius) << "\n";
  os << "mhp_distance = " << fmt(mhp_distance) << "\n";
  os << "\n[receiver]\n";
  os << "n_pd = " << n_pd << "\n";
  os << "responsivity = " << fmt(responsivity) << "\n";
  os << "fov_deg = " << fmt(fov_deg) << "\n";
  os << "pd_tilt_deg = " << fmt(pd_tilt_deg) << "\n";
  os << "active_area_fraction = " << fmt(active_area_fraction) << "\n";
  os << "index = " << fmt(receiver_index) << "\n";
  os << "\n[ofdm]\n";
  os << "fft_size = " << ofdm.fft_size_m << "\n";
  os << "bandwidth = " << fmt(ofdm.bandwidth_b) << "\n";
  os << "dc_bias_sigmas = " << fmt(ofdm.dc_bias_sigmas) << "\n";
  os << "\n[noise]\n";
  os << "noise_figure_db = " << fmt(noise_figure_db) << "\n";
  os << "rin_db_hz = " << fmt(rin_db_hz) << "\n";
  os << "load_ohm = " << fmt(load_ohm) << "\n";
  os << "temperature_k = " << fmt(temperature_k) << "\n";
  os << "ref_photocurrent = " << fmt(ref_photocurrent_a) << "\n";
  os << "psd_nt_override = " << fmt(psd_nt_override) << "\n";
  os << "\n[phy]\n";
  os << "target_ber = " << fmt(target_ber) << "\n";
  os << "interference_model = \"" << interference_model << "\"\n";
  for (const auto& k : classes) {
    os << "\n[classes." << k.name << "]\n";
    os << "min_rate = " << fmt(k.min_rate) << "\n";
    os << "mean_session = " << fmt(k.mean_session) << "\n";
    os << "omega = " << fmt(k.shape_omega) << "\n";
    os << "arrival_rate = " << fmt(k.arrival_rate) << "\n";
    os << "p_min = " << fmt(k.p_min) << "\n";
    os << "p_max = " << fmt(k.p_max) << "\n";
  }
  os << "\n[mobility]\n";
  os << "speed_min = " << fmt(speed_min) << "\n";
  os << "speed_max = " << fmt(speed_max) << "\n";
  os << "pause_min = " << fmt(pause_min) << "\n";
  os << "pause_max = " << fmt(pause_max) << "\n";
  os << "mean_residence = " << fmt(mean_residence) << "\n";
  os << "\n[predictor]\n";
  os << "epsilon = " << fmt(epsilon) << "\n";
  os << "obs_interval = " << fmt(obs_interval) << "\n";
  os << "window_slots = " << window_slots << "\n";
  os << "pmf_tail_cutoff = " << fmt(pmf_tail_cutoff) << "\n";
  os << "\n[optimizer]\n";
  os << "tol = " << fmt(opt_tol) << "\n";
  os << "max_iter = " << opt_max_iter << "\n";
  os << "step_scale = " << fmt(opt_step_scale) << "\n";
  os << "damping = " << fmt(opt_damping) << "\n";
  os << "inner_sweeps = " << opt_inner_sweeps << "\n";
  os << "interference_sweeps = " << interference_sweeps << "\n";
  os << "max_interference_sweeps = " << max_interference_sweeps << "\n";
  os << "alternations = " << alternations << "\n";
  os << "\n[harness]\n";
  os << "slots = " << slots_total << "\n";
  os << "slot_tau = " << fmt(slot_tau) << "\n";
  os << "warmup_slots = " << warmup_slots << "\n";
  os << "users_initial = " << users_initial << "\n";
  os << "scheme = \"" << scheme << "\"\n";
  os << "seed = " << seed << "\n";
  os << "arrival_scale = " << fmt(arrival_scale) << "\n";
  os << "ap_grid = [" << ap_grid_x << ", " << ap_grid_y << "]\n";
  os << "dump_snapshots = " << (dump_snapshots ? "true" : "false") << "\n";
  os << "dump_alloc = " << (dump_alloc ? "true" : "false") << "\n";
  os << "dump_forecasts = " << (dump_forecasts ? "true" : "false") << "\n";
  os << "\n[sweep]\n";
  os << "mu_values = " << fmt(mu_values) << "\n";
  os << "tau_values = " << fmt(tau_values) << "\n";
  os << "snr_grid_db = " << fmt(snr_grid_db) << "\n";
  os << "ber_frames = " << ber_frames << "\n";
  return os.str();
}

std::uint64_t ScenarioConfig::config_hash() const {
  const std::string text = canonical_toml();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

struct Parser {
  ScenarioConfig cfg = default_config();
  std::string section;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "config line " << line_no << ": " << msg;
    throw Error(ErrorCode::config_invalid, os.str());
  }

  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }

  double as_double(const std::string& v) const {
    try {
      std::size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) fail("trailing characters after number '" + v + "'");
      return d;
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail("expected a number, got '" + v + "'");
    }
  }

  std::int64_t as_int(const std::string& v) const {
    const double d = as_double(v);
    if (d != std::floor(d)) fail("expected an integer, got '" + v + "'");
    return std::int64_t(d);
  }

  bool as_bool(const std::string& v) const {
    if (v == "true") return true;
    if (v == "false") return false;
    fail("expected true/false, got '" + v + "'");
  }

  std::string as_string(const std::string& v) const {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
      return v.substr(1, v.size() - 2);
    }
    return v;
  }

  std::vector<double> as_array(const std::string& v) const {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      fail("expected an array [..], got '" + v + "'");
    }
    std::vector<double> out;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(as_double(item));
    }
    if (out.empty()) fail("empty array");
    return out;
  }

  ServiceClass& class_by_name(const std::string& name) {
    for (auto& k : cfg.classes) {
      if (k.name == name) return k;
    }
    ServiceClass fresh;
    fresh.id = int(cfg.classes.size());
    fresh.name = name;
    cfg.classes.push_back(fresh);
    return cfg.classes.back();
  }

  void set(const std::string& key, const std::string& value) {
    auto& c = cfg;
    const std::string where = section + "." + key;
    if (section.rfind("classes.", 0) == 0) {
      ServiceClass& k = class_by_name(section.substr(8));
      if (key == "min_rate") k.min_rate = as_double(value);
      else if (key == "mean_session") k.mean_session = as_double(value);
      else if (key == "omega") k.shape_omega = as_double(value);
      else if (key == "arrival_rate") k.arrival_rate = as_double(value);
      else if (key == "p_min") k.p_min = as_double(value);
      else if (key == "p_max") k.p_max = as_double(value);
      else fail("unknown key '" + where + "'");
      return;
    }
    if (section == "room") {
      if (key == "dims") {
        auto a = as_array(value);
        if (a.size() != 3) fail("room.dims needs 3 entries");
        c.room_dims = {a[0], a[1], a[2]};
      } else fail("unknown key '" + where + "'");
    } else if (section == "transmitter") {
      if (key == "h_tx") c.h_tx = as_double(value);
      else if (key == "beam_waist") c.vcsel.beam_waist_w0 = as_double(value);
      else if (key == "wavelength") c.vcsel.wavelength_lambda = as_double(value);
      else if (key == "medium_index") c.vcsel.medium_index_n = as_double(value);
      else if (key == "per_vcsel_power") c.vcsel.emit_power_pout = as_double(value);
      else if (key == "array_side") c.array_side = int(as_int(value));
      else if (key == "element_pitch") c.element_pitch = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "lens") {
      if (key == "focal_length") c.lens.focal_length_f = as_double(value);
      else if (key == "vcsel_to_lens") c.lens.vcsel_to_lens_d1 = as_double(value);
      else if (key == "index") c.lens_index = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "eye_safety") {
      if (key == "mpe") c.mpe = as_double(value);
      else if (key == "pupil_radius") c.pupil_radius = as_double(value);
      else if (key == "mhp_distance") c.mhp_distance = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "receiver") {
      if (key == "n_pd") c.n_pd = int(as_int(value));
      else if (key == "responsivity") c.responsivity = as_double(value);
      else if (key == "fov_deg") c.fov_deg = as_double(value);
      else if (key == "pd_tilt_deg") c.pd_tilt_deg = as_double(value);
      else if (key == "active_area_fraction") c.active_area_fraction = as_double(value);
      else if (key == "index") c.receiver_index = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "ofdm") {
      if (key == "fft_size") c.ofdm.fft_size_m = int(as_int(value));
      else if (key == "bandwidth") c.ofdm.bandwidth_b = as_double(value);
      else if (key == "dc_bias_sigmas") c.ofdm.dc_bias_sigmas = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "noise") {
      if (key == "noise_figure_db") c.noise_figure_db = as_double(value);
      else if (key == "rin_db_hz") c.rin_db_hz = as_double(value);
      else if (key == "load_ohm") c.load_ohm = as_double(value);
      else if (key == "temperature_k") c.temperature_k = as_double(value);
      else if (key == "ref_photocurrent") c.ref_photocurrent_a = as_double(value);
      else if (key == "psd_nt_override") c.psd_nt_override = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "phy") {
      if (key == "target_ber") c.target_ber = as_double(value);
      else if (key == "interference_model") c.interference_model = as_string(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "mobility") {
      if (key == "speed_min") c.speed_min = as_double(value);
      else if (key == "speed_max") c.speed_max = as_double(value);
      else if (key == "pause_min") c.pause_min = as_double(value);
      else if (key == "pause_max") c.pause_max = as_double(value);
      else if (key == "mean_residence") c.mean_residence = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "predictor") {
      if (key == "epsilon") c.epsilon = as_double(value);
      else if (key == "obs_interval") c.obs_interval = as_double(value);
      else if (key == "window_slots") c.window_slots = int(as_int(value));
      else if (key == "pmf_tail_cutoff") c.pmf_tail_cutoff = as_double(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "optimizer") {
      if (key == "tol") c.opt_tol = as_double(value);
      else if (key == "max_iter") c.opt_max_iter = int(as_int(value));
      else if (key == "step_scale") c.opt_step_scale = as_double(value);
      else if (key == "damping") c.opt_damping = as_double(value);
      else if (key == "inner_sweeps") c.opt_inner_sweeps = int(as_int(value));
      else if (key == "interference_sweeps") c.interference_sweeps = int(as_int(value));
      else if (key == "max_interference_sweeps") c.max_interference_sweeps = int(as_int(value));
      else if (key == "alternations") c.alternations = int(as_int(value));
      else fail("unknown key '" + where + "'");
    } else if (section == "harness") {
      if (key == "slots") c.slots_total = int(as_int(value));
      else if (key == "slot_tau") c.slot_tau = as_double(value);
      else if (key == "warmup_slots") c.warmup_slots = int(as_int(value));
      else if (key == "users_initial") c.users_initial = int(as_int(value));
      else if (key == "scheme") c.scheme = as_string(value);
      else if (key == "seed") c.seed = std::uint64_t(as_int(value));
      else if (key == "arrival_scale") c.arrival_scale = as_double(value);
      else if (key == "ap_grid") {
        auto a = as_array(value);
        if (a.size() != 2) fail("harness.ap_grid needs 2 entries");
        c.ap_grid_x = int(a[0]);
        c.ap_grid_y = int(a[1]);
      } else if (key == "dump_snapshots") c.dump_snapshots = as_bool(value);
      else if (key == "dump_alloc") c.dump_alloc = as_bool(value);
      else if (key == "dump_forecasts") c.dump_forecasts = as_bool(value);
      else fail("unknown key '" + where + "'");
    } else if (section == "sweep") {
      if (key == "mu_values") c.mu_values = as_array(value);
      else if (key == "tau_values") c.tau_values = as_array(value);
      else if (key == "snr_grid_db") c.snr_grid_db = as_array(value);
      else if (key == "ber_frames") c.ber_frames = int(as_int(value));
      else fail("unknown key '" + where + "'");
    } else {
      fail("key '" + key + "' outside any known section");
    }
  }

  void feed(const std::string& text) {
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
      ++line_no;
      std::string line = raw;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail("malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        static const char* known[] = {
            "room", "transmitter", "lens", "eye_safety", "receiver", "ofdm",
            "noise", "phy", "mobility", "predictor", "optimizer", "harness",
            "sweep"};
        bool ok = section.rfind("classes.", 0) == 0;
        for (const char* k : known) ok = ok || section == k;
        if (!ok) fail("unknown section [" + section + "]");
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) fail("empty key or value");
      set(key, value);
    }
  }
};

}  // namespace

ScenarioConfig parse_scenario_string(const std::string& text) {
  Parser p;
  p.feed(text);
  p.cfg.validate();
  return p.cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_failure, "cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_string(ss.str());
}

}  // namespace owc
