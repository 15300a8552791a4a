#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "owcsim/rng.hpp"

namespace owc {

// DCO-OFDM frame parameters. With unit-energy QAM symbols and the unitary
// transform pair, the alpha scaling makes the pre-bias time signal have unit
// average power: xi * alpha^2 = 1.
struct OfdmParams {
  int fft_size_m = 64;        // power of two, >= 4
  double bandwidth_b = 1.5e9;  // Hz
  double dc_bias_sigmas = 3.0;  // bias in std devs of the scaled AC signal

  double utilization_xi() const {
    return double(fft_size_m - 2) / fft_size_m;
  }
  double norm_alpha() const {
    return std::sqrt(double(fft_size_m) / (fft_size_m - 2));
  }
  int data_subcarriers() const { return fft_size_m / 2 - 1; }
  double dc_bias(double tx_power) const {
    return dc_bias_sigmas * std::sqrt(tx_power);
  }
  void validate() const;
};

struct QamLink {
  double target_ber = 1e-3;
  double sinr_gap_gamma = 0.0;  // filled by sinr_gap()
  int constellation_f = 4;
};

// Receiver noise. sigma2 = psd * bandwidth by construction.
struct NoiseModel {
  double psd_nt = 0.0;        // W/Hz (A^2/Hz at the photocurrent)
  double variance_sigma2 = 0.0;
  double rin_db_per_hz = -155.0;
  double noise_figure_fn_db = 5.0;

  static NoiseModel from_psd(double psd, double bandwidth, double rin_db,
                             double fn_db);
  // Thermal floor scaled by the preamp noise figure plus RIN referred to a
  // nominal DC photocurrent.
  static NoiseModel from_components(double bandwidth, double fn_db,
                                    double rin_db, double load_ohm,
                                    double temperature_k,
                                    double ref_photocurrent_a);
};

// Gamma = -ln(5 BER) / 1.5. Throws InvalidBer unless 0 < ber < 0.2.
double sinr_gap(double target_ber);

// 0.2 exp(-1.5 sinr / (F - 1))
double ber_upper_bound(double sinr, int constellation_f);

struct ConstellationChoice {
  int f = 4;
  bool below_min_order = false;
};

// Largest supported square-QAM order (4/16/64/256) not exceeding
// 1 + sinr/Gamma; flags when even 4-QAM is not supported.
ConstellationChoice max_constellation(double sinr, double gamma);

// Unitary DFT pair (1/sqrt(M) each direction), radix-2, in place.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

struct ModulatedFrame {
  std::vector<double> samples;  // length M, biased, clipped at zero
  int clipped_count = 0;
};

// Hermitian-symmetric QAM loading, alpha scaling, inverse transform, then
// sqrt(P) scaling plus DC bias with zero-clipping. bits.size() must equal
// (M/2 - 1) * log2(F).
ModulatedFrame modulate_frame(const std::vector<std::uint8_t>& bits, int f,
                              const OfdmParams& p, double tx_power);

// Bias removal, forward transform, nearest-neighbour decisions. amp_scale is
// the known amplitude through the channel (channel gain times any precoding
// weight); 1.0 for loopback.
std::vector<std::uint8_t> demodulate_frame(const std::vector<double>& samples,
                                           const OfdmParams& p, int f,
                                           double tx_power,
                                           double amp_scale = 1.0);

// R^2 alpha^2 P / (xi sigma^2)
double subcarrier_snr(double power, double responsivity, const OfdmParams& p,
                      const NoiseModel& n);

// xi B log2(1 + (e/2pi) (R H)^2 P / (Gamma (xi^2 sigma^2 + interference)))
double user_rate(double power, double gain, double responsivity,
                 double interference, const QamLink& link, const OfdmParams& p,
                 const NoiseModel& n);

// Hermitian loading + transform of explicit data symbols; modulate_frame is
// this plus the QAM bit mapping.
ModulatedFrame assemble_frame(const std::vector<std::complex<double>>& data_symbols,
                              const OfdmParams& p, double tx_power);

// Utility applied to rates inside the energy-efficiency objective. Natural
// log; kept in one place so a base change is a one-line edit.
inline double rate_utility(double rate) { return std::log(rate); }

struct BerPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  std::uint64_t bits = 0;
};

struct BerCurveUser {
  double power = 0.0;  // allocated power, weights the per-user SNR offset
  double gain = 1.0;
};

// Monte-Carlo BER over an AWGN grid. Each user's per-symbol SNR is offset
// from the grid value by its share of allocated electrical power, so scheme
// allocations separate the curves. Deterministic for a fixed seed.
std::vector<BerPoint> simulate_ber_curve(const std::vector<BerCurveUser>& users,
                                         int f, const std::vector<double>& snr_grid_db,
                                         int frames_per_point, const OfdmParams& p,
                                         std::uint64_t seed);

}  // namespace owc
