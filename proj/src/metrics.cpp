#include "ratecount/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ratecount/error.hpp"

namespace ratecount {
namespace {

void check_pair(std::span<const double> est, std::span<const double> ref) {
  if (est.size() != ref.size()) throw std::invalid_argument("series lengths differ");
  if (est.empty()) throw std::invalid_argument("empty series");
}

}  // namespace

double rmse(std::span<const double> estimates, std::span<const double> references) {
  check_pair(estimates, references);
  double ss = 0;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    const double e = estimates[j] - references[j];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(estimates.size()));
}

double mape(std::span<const double> estimates, std::span<const double> references) {
  check_pair(estimates, references);
  double sum = 0;
  std::size_t kept = 0;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    if (references[j] == 0) continue;
    sum += std::abs(estimates[j] - references[j]) / references[j];
    ++kept;
  }
  if (kept == 0) throw InputError("MAPE undefined: every reference is zero");
  return sum / static_cast<double>(kept);
}

double nrmse(std::span<const double> estimates, std::span<const double> references) {
  check_pair(estimates, references);
  const double mean =
      std::accumulate(references.begin(), references.end(), 0.0) / static_cast<double>(references.size());
  if (!(mean > 0)) throw InputError("NRMSE undefined: mean reference is not positive");
  return rmse(estimates, references) / mean;
}

}  // namespace ratecount
