#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ratecount/rate_counter.hpp"

namespace ratecount {

/// Device-to-person ratio learned in a calibration region, with the error
/// terms needed to propagate uncertainty into people counts.
struct CalibrationRatio {
  double alpha = 1.0;              // devices per person
  double nrmse_people_ref = 0.0;   // error of the reference people counter
  double nrmse_device_cal = 0.0;   // rate-model error in the calibration region
  double source_window_span = 0.0; // seconds covered by the calibration series

  std::string serialize() const;
  static CalibrationRatio deserialize(std::string_view text);
};

/// Reference (e.g. camera) window-averaged people count for the window starting
/// at `start`.
struct PeopleReference {
  double start = 0.0;
  double m_bar = 0.0;
};

struct PeopleEstimate {
  Window window;
  double m_hat = 0.0;
  std::optional<double> nrmse_estimate;
};

/// Ratio of sums: alpha = sum(n_hat) / sum(m_bar) over aligned windows.
/// nrmse_device_cal is the mean of the per-window NRMSE bounds.
/// Throws InputError for misaligned series or no people, InsufficientData when
/// no bursts were observed.
CalibrationRatio estimate_ratio(std::span<const WindowEstimate> device_series,
                                std::span<const PeopleReference> people_series,
                                double nrmse_people_ref = 0.0);

/// m_hat = n_hat / alpha with the root-sum-square error of the reference, the
/// calibration and this window. The error is empty for a window without bursts.
PeopleEstimate people_count(const WindowEstimate& estimate, const CalibrationRatio& ratio);

double propagate_nrmse(double reference, double calibration, double window);

}  // namespace ratecount
