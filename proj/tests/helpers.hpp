#pragma once

#include <cmath>
#include <functional>
#include <vector>

// Shared test oracles: quadrature, simple statistics tables, and complex
// q-parameter beam propagation. Everything here is independent of the
// library implementation paths it checks.
namespace testutil {

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

// Chi-square critical values at significance 0.01 (i.e. chi2inv(0.99, dof))
// via the Wilson-Hilferty approximation; good to ~0.5% for dof >= 10.
inline double chi2_crit_99(int dof) {
  const double z = 2.3263478740408408;  // Phi^-1(0.99)
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

// Kolmogorov-Smirnov critical value at significance 0.01.
inline double ks_crit_01(std::size_t n) { return 1.6276 / std::sqrt(double(n)); }

// One-sided sign-test p-value: P(X >= wins) for X ~ Binomial(n, 1/2),
// computed in log space.
inline double sign_test_p(int wins, int n) {
  double p = 0.0;
  double log_half = std::log(0.5);
  for (int k = wins; k <= n; ++k) {
    double log_c = 0.0;
    for (int j = 0; j < k; ++j) {
      log_c += std::log(double(n - j)) - std::log(double(j + 1));
    }
    p += std::exp(log_c + n * log_half);
  }
  return p;
}

struct Complexd {
  double re = 0.0, im = 0.0;
};

// Gaussian-beam q-parameter pushed through free space d1, a thin lens of
// focal length f, then to the downstream waist. Returns the waist location
// after the lens and the waist radius.
inline void abcd_waist(double w0, double lambda, double d1, double f,
                       double& d2_out, double& wd_out) {
  const double zr = M_PI * w0 * w0 / lambda;
  // q1 = d1 + i zr ; 1/q2 = 1/q1 - 1/f
  const double a = d1, b = zr;
  const double n2 = a * a + b * b;
  double inv_re = a / n2 - 1.0 / f;
  double inv_im = -b / n2;
  const double m2 = inv_re * inv_re + inv_im * inv_im;
  const double q2_re = inv_re / m2;
  const double q2_im = -inv_im / m2;
  d2_out = -q2_re;
  const double zr2 = q2_im;
  wd_out = std::sqrt(lambda * zr2 / M_PI);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Empirical mean of a sample.
inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

}  // namespace testutil
