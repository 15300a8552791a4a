#pragma once

#include <vector>

#include "owcsim/traffic.hpp"

namespace owc {

// Per-(AP, class) record of counts observed inside one slot.
struct ObservationWindow {
  int ap = 0;
  int class_id = 0;
  std::vector<double> timestamps;  // strictly increasing, within the slot
  std::vector<int> counts;
  int arrivals_seen = 0;
  double window_span = 0.0;  // s, time covered by the arrival count

  void validate() const;
};

struct PredictorParams {
  double epsilon = 0.05;        // quantile level in [0, 1]
  double horizon_tau = 30.0;    // s
  double pmf_tail_cutoff = 1e-12;

  void validate() const;
};

struct DemandForecast {
  int ap = 0;
  int class_id = 0;
  int n_tilde = 0;              // predicted count, epsilon quantile
  std::vector<double> pmf;
  double p_tau = 0.0;
  double q_tau = 0.0;
  double mu_hat = 0.0;          // estimated arrival rate, users/s
  int basis_count = 0;          // conditioning count N(t)
};

// Probability that a user present now is still present tau later:
// (1/E[Th]) * integral_tau^inf (1 - F_Th). Closed form from the mixture.
double persistence_prob(double tau, double tr, double td, double omega);

// (E[Th]/tau) * (1 - p_tau): survival probability of an arrival landing
// uniformly inside the window.
double arrival_persistence_prob(double tau, double mean_th, double p_tau);

// Distribution of Binomial(n_now, p_tau) + Poisson(poisson_mean) by exact
// convolution, truncated where the Poisson tail falls below tail_cutoff.
std::vector<double> transient_pmf(int n_now, double p_tau, double poisson_mean,
                                  double tail_cutoff = 1e-12);

// Smallest N with CDF(N) >= 1 - epsilon. Throws EpsilonUnreachable when the
// retained mass cannot reach the target.
int forecast_quantile(const std::vector<double>& pmf, double epsilon);

// arrivals / elapsed time.
double estimate_arrival_rate(const ObservationWindow& w);

// Full pipeline: conditions on the window's latest count, estimates the
// arrival rate, builds the transient PMF and takes the epsilon quantile.
DemandForecast predict_slot(const ObservationWindow& w,
                            const PredictorParams& params,
                            const ServiceClass& cls, double mean_residence);

struct PredictionLoss {
  double mae = 0.0;
  double violation_rate = 0.0;  // fraction of slots with actual > forecast
};

PredictionLoss prediction_loss(const std::vector<int>& forecasts,
                               const std::vector<int>& actuals);

}  // namespace owc
