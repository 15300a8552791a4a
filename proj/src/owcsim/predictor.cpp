#include "owcsim/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "owcsim/errors.hpp"

namespace owc {

void ObservationWindow::validate() const {
  if (timestamps.size() != counts.size() || timestamps.empty()) {
    throw Error(ErrorCode::config_invalid,
                "ObservationWindow: need matching, non-empty series");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw Error(ErrorCode::config_invalid,
                  "ObservationWindow: timestamps must be strictly increasing");
    }
  }
  for (int c : counts) {
    if (c < 0) {
      throw Error(ErrorCode::config_invalid,
                  "ObservationWindow: negative count");
    }
  }
}

void PredictorParams::validate() const {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw Error(ErrorCode::config_invalid,
                "PredictorParams: epsilon outside [0, 1]");
  }
  if (horizon_tau < 0.0 || pmf_tail_cutoff <= 0.0) {
    throw Error(ErrorCode::config_invalid, "PredictorParams: bad parameters");
  }
}

double persistence_prob(double tau, double tr, double td, double omega) {
  if (tau < 0.0) {
    throw Error(ErrorCode::config_invalid, "persistence_prob: tau must be >= 0");
  }
  const double w1 = omega / (omega + 1.0);
  const double w2 = 1.0 / (omega + 1.0);
  const double r1 = 1.0 / tr + omega / td;
  const double r2 = 1.0 / tr + 1.0 / (omega * td);
  // Each exponential survival term integrates to exp(-r tau)/r.
  const double tail = w1 * std::exp(-r1 * tau) / r1 + w2 * std::exp(-r2 * tau) / r2;
  return tail / mean_holding_time(tr, td, omega);
}

double arrival_persistence_prob(double tau, double mean_th, double p_tau) {
  if (tau <= 0.0) {
    throw Error(ErrorCode::config_invalid,
                "arrival_persistence_prob: tau must be > 0");
  }
  return mean_th / tau * (1.0 - p_tau);
}

std::vector<double> transient_pmf(int n_now, double p_tau, double poisson_mean,
                                  double tail_cutoff) {
  // Binomial(n_now, p) part.
  std::vector<double> binom(std::size_t(n_now) + 1, 0.0);
  if (p_tau >= 1.0) {
    binom[std::size_t(n_now)] = 1.0;
  } else if (p_tau <= 0.0) {
    binom[0] = 1.0;
  } else {
    binom[0] = std::pow(1.0 - p_tau, n_now);
    for (int k = 1; k <= n_now; ++k) {
      binom[std::size_t(k)] = binom[std::size_t(k - 1)] *
                              double(n_now - k + 1) / double(k) * p_tau /
                              (1.0 - p_tau);
    }
  }
  // Poisson part, truncated once the remaining tail mass drops below cutoff.
  std::vector<double> pois;
  double term = std::exp(-poisson_mean);
  double cum = term;
  pois.push_back(term);
  for (int k = 1; cum < 1.0 - tail_cutoff; ++k) {
    term *= poisson_mean / k;
    pois.push_back(term);
    cum += term;
    if (k > 100000) break;
  }
  std::vector<double> out(binom.size() + pois.size() - 1, 0.0);
  for (std::size_t i = 0; i < binom.size(); ++i) {
    if (binom[i] == 0.0) continue;
    for (std::size_t j = 0; j < pois.size(); ++j) {
      out[i + j] += binom[i] * pois[j];
    }
  }
  // Renormalize the truncation away.
  double total = 0.0;
  for (double v : out) total += v;
  if (total > 0.0) {
    for (auto& v : out) v /= total;
  }
  return out;
}

int forecast_quantile(const std::vector<double>& pmf, double epsilon) {
  const double target = 1.0 - epsilon;
  double cdf = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    cdf += pmf[i];
    if (cdf >= target) return int(i);
  }
  // Allow for roundoff at the very top of the distribution.
  if (cdf >= target - 1e-9 && !pmf.empty()) return int(pmf.size()) - 1;
  throw Error(ErrorCode::epsilon_unreachable,
              "forecast_quantile: retained mass below 1 - epsilon");
}

double estimate_arrival_rate(const ObservationWindow& w) {
  if (w.window_span <= 0.0) {
    throw Error(ErrorCode::config_invalid,
                "estimate_arrival_rate: window span must be > 0");
  }
  return double(w.arrivals_seen) / w.window_span;
}

DemandForecast predict_slot(const ObservationWindow& w,
                            const PredictorParams& params,
                            const ServiceClass& cls, double mean_residence) {
  w.validate();
  params.validate();
  DemandForecast f;
  f.ap = w.ap;
  f.class_id = w.class_id;
  f.basis_count = w.counts.back();  // condition on the most recent count
  f.p_tau = persistence_prob(params.horizon_tau, mean_residence,
                             cls.mean_session, cls.shape_omega);
  const double mean_th =
      mean_holding_time(mean_residence, cls.mean_session, cls.shape_omega);
  f.q_tau = params.horizon_tau > 0.0
                ? arrival_persistence_prob(params.horizon_tau, mean_th, f.p_tau)
                : 1.0;
  f.mu_hat = estimate_arrival_rate(w);
  const double poisson_mean = f.mu_hat * params.horizon_tau * f.q_tau;
  f.pmf = transient_pmf(f.basis_count, f.p_tau, poisson_mean,
                        params.pmf_tail_cutoff);
  f.n_tilde = forecast_quantile(f.pmf, params.epsilon);
  return f;
}

PredictionLoss prediction_loss(const std::vector<int>& forecasts,
                               const std::vector<int>& actuals) {
  if (forecasts.size() != actuals.size()) {
    throw Error(ErrorCode::length_mismatch,
                "prediction_loss: series lengths differ");
  }
  PredictionLoss out;
  if (forecasts.empty()) return out;
  double abs_sum = 0.0;
  int violations = 0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    abs_sum += std::abs(double(forecasts[i]) - double(actuals[i]));
    if (actuals[i] > forecasts[i]) ++violations;
  }
  out.mae = abs_sum / double(forecasts.size());
  out.violation_rate = double(violations) / double(forecasts.size());
  return out;
}

}  // namespace owc
