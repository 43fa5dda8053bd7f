#include "ratecount/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ratecount/error.hpp"

namespace ratecount {

double chi_squared_sf(double x, double dof) {
  if (!(dof > 0)) throw std::invalid_argument("chi-squared dof must be positive");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi-theta form of the CDF converges fast for small lambda.
    const double f = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0;
    for (int k = 1; k <= 32; k += 2) cdf += std::exp(f * k * k);
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

TestResult ljung_box(std::span<const double> samples, std::size_t num_lags) {
  const std::size_t n = samples.size();
  if (num_lags < 1 || n <= num_lags) {
    throw std::invalid_argument("ljung_box requires samples > num_lags >= 1");
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double c0 = 0;
  for (double x : samples) c0 += (x - mean) * (x - mean);
  if (!(c0 > 0)) throw InputError("ljung_box: zero-variance samples");

  const double nd = static_cast<double>(n);
  double q = 0;
  for (std::size_t k = 1; k <= num_lags; ++k) {
    double ck = 0;
    for (std::size_t i = k; i < n; ++i) ck += (samples[i] - mean) * (samples[i - k] - mean);
    const double rho = ck / c0;
    q += rho * rho / (nd - static_cast<double>(k));
  }
  q *= nd * (nd + 2.0);
  return {q, chi_squared_sf(q, static_cast<double>(num_lags))};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample requires non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());

  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = nx * ny / (nx + ny);
  return {d, kolmogorov_sf(std::sqrt(ne) * d)};
}

}  // namespace ratecount
