#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratecount/burst.hpp"

namespace ratecount {

inline constexpr double kDefaultIntervalCutoff = 600.0;
inline constexpr double kDefaultBinWidth = 10.0;

/// Time between two consecutive probing instants sharing a key (a MAC, or a
/// device id when ground truth is available).
struct IntervalSample {
  double tau = 0.0;
  std::string key;
};

/// A probing instant labelled with the entity that produced it.
struct KeyedInstant {
  std::string key;
  double instant = 0.0;
};

/// Per-MAC consecutive probing-instant differences; differences above `cutoff`
/// are dropped. Bursts must be ordered by probing instant.
std::vector<IntervalSample> extract_intervals(std::span<const Burst> bursts,
                                              double cutoff = kDefaultIntervalCutoff);

/// Same rule over arbitrary keys, e.g. simulator device ids.
std::vector<IntervalSample> extract_intervals(std::span<const KeyedInstant> instants,
                                              double cutoff = kDefaultIntervalCutoff);

struct FitOptions {
  std::string area_id = "default";
  double bin_width = kDefaultBinWidth;
  double cutoff = kDefaultIntervalCutoff;
};

/// Empirical probing-interval distribution of one counting area.
struct IntervalModel {
  std::string area_id = "default";
  double tau_mean = 0.0;
  double tau_std = 0.0;
  std::size_t sample_count = 0;
  double bin_width = kDefaultBinWidth;
  /// Bin i covers [i * bin_width, (i + 1) * bin_width); the last bin is closed.
  std::vector<std::uint64_t> histogram;

  double mean_rate() const { return 1.0 / tau_mean; }

  std::string serialize() const;
  /// Throws InputError on a malformed or inconsistent document.
  static IntervalModel deserialize(std::string_view text);

  friend bool operator==(const IntervalModel&, const IntervalModel&) = default;
};

/// Sample mean, sample standard deviation (n - 1) and a histogram over
/// [0, max(cutoff, largest sample)]. Throws InsufficientData below two samples.
IntervalModel fit(std::span<const double> taus, const FitOptions& options = {});
IntervalModel fit(std::span<const IntervalSample> samples, const FitOptions& options = {});

}  // namespace ratecount
