#include "owcsim/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "owcsim/errors.hpp"
#include "owcsim/kernels/kernels.hpp"

namespace owc {

void OfdmParams::validate() const {
  if (fft_size_m < 4 || (fft_size_m & (fft_size_m - 1)) != 0) {
    throw Error(ErrorCode::config_invalid,
                "OfdmParams: fft size must be a power of two >= 4");
  }
  if (bandwidth_b <= 0.0) {
    throw Error(ErrorCode::config_invalid, "OfdmParams: bandwidth must be > 0");
  }
  if (dc_bias_sigmas < 0.0) {
    throw Error(ErrorCode::config_invalid, "OfdmParams: bias must be >= 0");
  }
}

NoiseModel NoiseModel::from_psd(double psd, double bandwidth, double rin_db,
                                double fn_db) {
  NoiseModel n;
  n.psd_nt = psd;
  n.variance_sigma2 = psd * bandwidth;
  n.rin_db_per_hz = rin_db;
  n.noise_figure_fn_db = fn_db;
  return n;
}

NoiseModel NoiseModel::from_components(double bandwidth, double fn_db,
                                       double rin_db, double load_ohm,
                                       double temperature_k,
                                       double ref_photocurrent_a) {
  constexpr double kBoltzmann = 1.380649e-23;
  const double thermal = 4.0 * kBoltzmann * temperature_k / load_ohm;
  const double fn_lin = std::pow(10.0, fn_db / 10.0);
  const double rin_lin = std::pow(10.0, rin_db / 10.0);
  const double psd = thermal * fn_lin +
                     rin_lin * ref_photocurrent_a * ref_photocurrent_a;
  return from_psd(psd, bandwidth, rin_db, fn_db);
}

double sinr_gap(double target_ber) {
  if (!(target_ber > 0.0) || !(target_ber < 0.2)) {
    throw Error(ErrorCode::invalid_ber,
                "sinr_gap: target BER must lie in (0, 0.2)");
  }
  return -std::log(5.0 * target_ber) / 1.5;
}

double ber_upper_bound(double sinr, int constellation_f) {
  return 0.2 * std::exp(-1.5 * sinr / (constellation_f - 1));
}

ConstellationChoice max_constellation(double sinr, double gamma) {
  const double f_raw = 1.0 + sinr / gamma;
  static constexpr int kSupported[] = {256, 64, 16, 4};
  for (int f : kSupported) {
    if (f_raw >= double(f)) return {f, false};
  }
  return {4, true};
}

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t m = data.size();
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  // Twiddle tables cached per size; each worker thread builds its own.
  thread_local std::unordered_map<std::size_t, std::vector<std::complex<double>>> cache;
  auto& tw = cache[m];
  if (tw.size() != m / 2) {
    tw.resize(m / 2);
    for (std::size_t k = 0; k < m / 2; ++k) {
      tw[k] = std::polar(1.0, -2.0 * M_PI * double(k) / double(m));
    }
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t stride = m / len;
    for (std::size_t i = 0; i < m; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> w = tw[j * stride];
        if (inverse) w = std::conj(w);
        const auto u = data[i + j];
        const auto v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(double(m));
  for (auto& c : data) c *= scale;
}

namespace {

inline int bits_per_axis(int f) {
  int b = 0;
  while ((1 << (2 * b)) < f) ++b;
  return b;
}

// Average symbol energy of odd-integer square QAM is 2(L^2-1)/3.
inline double qam_scale(int side) {
  return 1.0 / std::sqrt(2.0 * (double(side) * side - 1.0) / 3.0);
}

inline int gray_decode(unsigned g) {
  unsigned b = g;
  for (unsigned shift = 1; shift < 16; shift <<= 1) b ^= b >> shift;
  return int(b);
}

inline int decide_axis(double value, int side) {
  const double hi = double(side - 1);
  double v = (value + hi) * 0.5;
  v = v < 0.0 ? 0.0 : (v > hi ? hi : v);
  return int(std::lrint(v));
}

}  // namespace

ModulatedFrame assemble_frame(const std::vector<std::complex<double>>& data_symbols,
                              const OfdmParams& p, double tx_power) {
  const int m = p.fft_size_m;
  const double alpha = p.norm_alpha();
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(m));
  for (int l = 1; l <= p.data_subcarriers(); ++l) {
    const auto s = alpha * data_symbols[std::size_t(l - 1)];
    spec[std::size_t(l)] = s;
    spec[std::size_t(m - l)] = std::conj(s);
  }
  fft_inplace(spec, /*inverse=*/true);

  ModulatedFrame out;
  out.samples.resize(std::size_t(m));
  const double amp = std::sqrt(tx_power);
  const double bias = p.dc_bias(tx_power);
  for (int t = 0; t < m; ++t) {
    double v = amp * spec[std::size_t(t)].real() + bias;
    if (v < 0.0) {
      v = 0.0;
      ++out.clipped_count;
    }
    out.samples[std::size_t(t)] = v;
  }
  return out;
}

ModulatedFrame modulate_frame(const std::vector<std::uint8_t>& bits, int f,
                              const OfdmParams& p, double tx_power) {
  p.validate();
  const int b = bits_per_axis(f);
  const int side = 1 << b;
  const std::size_t need = std::size_t(p.data_subcarriers()) * 2 * b;
  if (bits.size() != need) {
    throw Error(ErrorCode::bit_count_mismatch,
                "modulate_frame: expected " + std::to_string(need) +
                    " bits, got " + std::to_string(bits.size()));
  }
  const double scale = qam_scale(side);
  std::vector<std::complex<double>> symbols(static_cast<std::size_t>(p.data_subcarriers()));
  std::size_t pos = 0;
  for (auto& sym : symbols) {
    unsigned gi = 0, gq = 0;
    for (int k = 0; k < b; ++k) gi = (gi << 1) | bits[pos++];
    for (int k = 0; k < b; ++k) gq = (gq << 1) | bits[pos++];
    const double li = 2.0 * gray_decode(gi) - (side - 1);
    const double lq = 2.0 * gray_decode(gq) - (side - 1);
    sym = scale * std::complex<double>(li, lq);
  }
  return assemble_frame(symbols, p, tx_power);
}

std::vector<std::uint8_t> demodulate_frame(const std::vector<double>& samples,
                                           const OfdmParams& p, int f,
                                           double tx_power, double amp_scale) {
  const int m = p.fft_size_m;
  if (int(samples.size()) != m) {
    throw Error(ErrorCode::length_mismatch,
                "demodulate_frame: sample count != fft size");
  }
  const double bias = amp_scale * p.dc_bias(tx_power);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    spec[std::size_t(t)] = samples[std::size_t(t)] - bias;
  }
  fft_inplace(spec, /*inverse=*/false);

  const int b = bits_per_axis(f);
  const int side = 1 << b;
  const double denom =
      p.norm_alpha() * std::sqrt(tx_power) * amp_scale * qam_scale(side);
  std::vector<std::uint8_t> bits;
  bits.reserve(std::size_t(p.data_subcarriers()) * 2 * b);
  for (int l = 1; l <= p.data_subcarriers(); ++l) {
    const auto y = spec[std::size_t(l)] / denom;
    const int ii = decide_axis(y.real(), side);
    const int qi = decide_axis(y.imag(), side);
    const unsigned gi = unsigned(ii ^ (ii >> 1));
    const unsigned gq = unsigned(qi ^ (qi >> 1));
    for (int k = b - 1; k >= 0; --k) bits.push_back((gi >> k) & 1u);
    for (int k = b - 1; k >= 0; --k) bits.push_back((gq >> k) & 1u);
  }
  return bits;
}

double subcarrier_snr(double power, double responsivity, const OfdmParams& p,
                      const NoiseModel& n) {
  const double a2 = p.norm_alpha() * p.norm_alpha();
  return responsivity * responsivity * a2 * power /
         (p.utilization_xi() * n.variance_sigma2);
}

double user_rate(double power, double gain, double responsivity,
                 double interference, const QamLink& link, const OfdmParams& p,
                 const NoiseModel& n) {
  const double xi = p.utilization_xi();
  const double rh = responsivity * gain;
  const double num = (M_E / (2.0 * M_PI)) * rh * rh * power;
  const double den = link.sinr_gap_gamma *
                     (xi * xi * n.variance_sigma2 + interference);
  return xi * p.bandwidth_b * std::log2(1.0 + num / den);
}

std::vector<BerPoint> simulate_ber_curve(const std::vector<BerCurveUser>& users,
                                         int f, const std::vector<double>& snr_grid_db,
                                         int frames_per_point, const OfdmParams& p,
                                         std::uint64_t seed) {
  p.validate();
  const int b = bits_per_axis(f);
  const int side = 1 << b;
  const int nsub = p.data_subcarriers();
  const double scale = qam_scale(side);
  const double alpha = p.norm_alpha();
  const double tx_power = 1.0;

  // Per-user electrical weight P * g^2 relative to the mean sets a dB offset
  // from the grid value.
  double mean_w = 0.0;
  for (const auto& u : users) mean_w += u.power * u.gain * u.gain;
  mean_w /= users.empty() ? 1.0 : double(users.size());

  std::vector<BerPoint> curve;
  curve.reserve(snr_grid_db.size());
  std::vector<std::uint8_t> bits(std::size_t(nsub) * 2 * b);
  std::vector<std::uint16_t> ref(static_cast<std::size_t>(nsub));
  std::vector<double> re(static_cast<std::size_t>(nsub)), im(static_cast<std::size_t>(nsub));
  std::vector<std::complex<double>> spec;

  for (std::size_t gi = 0; gi < snr_grid_db.size(); ++gi) {
    Rng rng = Rng::derive(seed, "ber-curve", gi);
    std::uint64_t errors = 0, total_bits = 0;
    const std::size_t nusers = users.empty() ? 1 : users.size();
    for (std::size_t ui = 0; ui < nusers; ++ui) {
      double offset_db = 0.0;
      if (!users.empty() && mean_w > 0.0) {
        const auto& u = users[ui];
        offset_db = 10.0 * std::log10(u.power * u.gain * u.gain / mean_w);
      }
      const double gamma_lin =
          std::pow(10.0, (snr_grid_db[gi] + offset_db) / 10.0);
      // Unitary FFT of real white noise gives per-bin complex variance
      // sigma_t^2; per-symbol SNR = alpha^2 P / sigma_t^2.
      const double sigma_t =
          alpha * std::sqrt(tx_power / gamma_lin);
      for (int frame = 0; frame < frames_per_point; ++frame) {
        for (auto& bit : bits) bit = std::uint8_t(rng.next_u64() & 1u);
        const ModulatedFrame tx = modulate_frame(bits, f, p, tx_power);
        spec.assign(tx.samples.begin(), tx.samples.end());
        const double bias = p.dc_bias(tx_power);
        for (auto& c : spec) {
          c = c.real() + sigma_t * rng.normal() - bias;
        }
        fft_inplace(spec, /*inverse=*/false);
        // Reference Gray labels from the transmitted bits.
        std::size_t pos = 0;
        for (int l = 0; l < nsub; ++l) {
          unsigned gri = 0, grq = 0;
          for (int k = 0; k < b; ++k) gri = (gri << 1) | bits[pos++];
          for (int k = 0; k < b; ++k) grq = (grq << 1) | bits[pos++];
          ref[std::size_t(l)] = std::uint16_t((gri << 8) | grq);
        }
        const double denom = alpha * std::sqrt(tx_power) * scale;
        for (int l = 1; l <= nsub; ++l) {
          re[std::size_t(l - 1)] = spec[std::size_t(l)].real() / denom;
          im[std::size_t(l - 1)] = spec[std::size_t(l)].imag() / denom;
        }
        errors += kernels::qam_error_count(re.data(), im.data(), ref.data(),
                                           std::size_t(nsub), side);
        total_bits += std::uint64_t(nsub) * 2 * b;
      }
    }
    curve.push_back({snr_grid_db[gi],
                     total_bits ? double(errors) / double(total_bits) : 0.0,
                     total_bits});
  }
  return curve;
}

}  // namespace owc
