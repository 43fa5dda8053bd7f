#pragma once

#include <span>

namespace ratecount {

// Accuracy of an estimate series against aligned references. All throw
// std::invalid_argument for empty or unequal-length series.

double rmse(std::span<const double> estimates, std::span<const double> references);

/// Mean absolute percentage error over windows with a non-zero reference.
/// Throws InputError when every reference is zero.
double mape(std::span<const double> estimates, std::span<const double> references);

/// RMSE divided by the mean reference. Throws InputError if that mean is not
/// positive.
double nrmse(std::span<const double> estimates, std::span<const double> references);

}  // namespace ratecount
