#include "ratecount/rate_counter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "ratecount/error.hpp"

namespace ratecount {
namespace {

void check_model(const IntervalModel& model) {
  if (model.sample_count == 0) throw InputError("unfitted interval model");
  if (!(model.tau_mean > 0)) throw InputError("interval model has non-positive tau_mean");
}

void check_window(const Window& window) {
  if (!(window.size > 0)) throw std::invalid_argument("window size must be positive");
}

}  // namespace

WindowEstimate estimate_from_count(std::size_t burst_count, const Window& window,
                                   const IntervalModel& model) {
  check_model(model);
  check_window(window);
  const double b = static_cast<double>(burst_count);
  const double w = window.size;
  WindowEstimate est;
  est.window = window;
  est.burst_count = burst_count;
  est.rate = b / w;
  est.n_hat = b * model.tau_mean / w;
  est.var_lower_bound = b * model.tau_std * model.tau_std / (w * w);
  if (burst_count > 0) est.nrmse_estimate = model.tau_std / (model.tau_mean * std::sqrt(b));
  return est;
}

WindowEstimate count_window(std::span<const Burst> bursts, const Window& window,
                            const IntervalModel& model) {
  const auto n = std::count_if(bursts.begin(), bursts.end(), [&](const Burst& b) {
    return window.contains(b.probing_instant);
  });
  return estimate_from_count(static_cast<std::size_t>(n), window, model);
}

std::vector<Window> window_grid(double first, double last, double size, double step) {
  if (!(size > 0) || !(step > 0)) throw std::invalid_argument("window size and step must be positive");
  std::vector<Window> out;
  for (std::size_t k = 0;; ++k) {
    const double start = first + static_cast<double>(k) * step;
    if (start > last) break;
    out.push_back({start, size});
  }
  return out;
}

std::vector<Window> window_span(double begin, double end, double size, double step) {
  if (!(size > 0) || !(step > 0)) throw std::invalid_argument("window size and step must be positive");
  std::vector<Window> out;
  for (std::size_t k = 0;; ++k) {
    const double start = begin + static_cast<double>(k) * step;
    if (start + size > end) break;
    out.push_back({start, size});
  }
  return out;
}

std::vector<WindowEstimate> count_windows(std::span<const Burst> bursts,
                                          std::span<const Window> windows,
                                          const IntervalModel& model) {
  check_model(model);
  auto by_instant = [](const Burst& b, double t) { return b.probing_instant < t; };
  std::vector<WindowEstimate> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const auto lo = std::lower_bound(bursts.begin(), bursts.end(), w.start, by_instant);
    const auto hi = std::lower_bound(lo, bursts.end(), w.end(), by_instant);
    out.push_back(estimate_from_count(static_cast<std::size_t>(hi - lo), w, model));
  }
  return out;
}

std::vector<WindowEstimate> sliding_windows(std::span<const Burst> bursts, double size,
                                            double step, const IntervalModel& model) {
  check_model(model);
  if (bursts.empty()) return {};
  const auto windows = window_grid(bursts.front().probing_instant,
                                   bursts.back().probing_instant, size, step);
  return count_windows(bursts, windows, model);
}

double mac_count_baseline(std::span<const PrfEvent> events, const Window& window) {
  check_window(window);
  auto by_time = [](const PrfEvent& e, double t) { return e.timestamp < t; };
  const auto lo = std::lower_bound(events.begin(), events.end(), window.start, by_time);
  const auto hi = std::lower_bound(lo, events.end(), window.end(), by_time);
  std::unordered_set<MacAddress> macs;
  for (auto it = lo; it != hi; ++it) macs.insert(it->mac);
  return static_cast<double>(macs.size());
}

}  // namespace ratecount
