#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ratecount/burst.hpp"
#include "ratecount/interval_model.hpp"
#include "ratecount/prf_event.hpp"

namespace ratecount {

inline constexpr double kDefaultWindow = 180.0;
inline constexpr double kDefaultStep = 180.0;
inline constexpr double kLabRoomWindow = 900.0;

/// Half-open counting window [start, start + size).
struct Window {
  double start = 0.0;
  double size = 0.0;

  double end() const { return start + size; }
  bool contains(double t) const { return t >= start && t < start + size; }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Rate-model result for one window. `nrmse_estimate` is the lower-bound NRMSE
/// and is empty when the window holds no bursts.
struct WindowEstimate {
  Window window;
  std::size_t burst_count = 0;
  double rate = 0.0;             // bursts per second
  double n_hat = 0.0;            // window-averaged device count
  double var_lower_bound = 0.0;  // devices^2
  std::optional<double> nrmse_estimate;
};

/// Rate model for a known burst count: R = B/w, n_hat = B*tau_mean/w,
/// variance bound B*sigma^2/w^2 and NRMSE bound sigma/(tau_mean*sqrt(B)).
/// Throws InputError for an unfitted model.
WindowEstimate estimate_from_count(std::size_t burst_count, const Window& window,
                                   const IntervalModel& model);

/// Counts bursts whose probing instant falls in `window` and applies the rate
/// model. The bursts need not be sorted.
WindowEstimate count_window(std::span<const Burst> bursts, const Window& window,
                            const IntervalModel& model);

/// Windows starting at first, first + step, ... up to and including the last
/// start <= last.
std::vector<Window> window_grid(double first, double last, double size, double step);

/// Windows starting at begin, begin + step, ... that fit entirely in [begin, end].
std::vector<Window> window_span(double begin, double end, double size, double step);

/// Rate-model estimates for `windows` over bursts sorted by probing instant.
/// Results follow the order of `windows`.
std::vector<WindowEstimate> count_windows(std::span<const Burst> bursts,
                                          std::span<const Window> windows,
                                          const IntervalModel& model);

/// Sliding windows of `size` seconds advanced by `step`, starting at the first
/// probing instant and continuing until the last instant is covered.
std::vector<WindowEstimate> sliding_windows(std::span<const Burst> bursts, double size,
                                            double step, const IntervalModel& model);

/// MAC-counting baseline: distinct MACs with at least one event in the window.
/// Events must be sorted by timestamp.
double mac_count_baseline(std::span<const PrfEvent> events, const Window& window);

}  // namespace ratecount
