#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ratecount/prf_event.hpp"

namespace ratecount {

inline constexpr double kDefaultBurstGap = 4.0;

/// Probe requests from one MAC sent in quick succession. The start time is the
/// probing instant.
struct Burst {
  MacAddress mac;
  double probing_instant = 0.0;
  double end_time = 0.0;
  std::size_t frame_count = 0;
  std::set<std::string> ap_ids;

  friend bool operator==(const Burst&, const Burst&) = default;
};

/// Groups time-sorted events into bursts, per MAC: an event within `gap`
/// seconds of the previous event of the same MAC extends its burst, otherwise
/// it opens a new one. Bursts are keyed by MAC alone so the same burst heard by
/// several capture points merges. Output is ordered by probing instant.
///
/// Throws std::invalid_argument when `gap` is not positive and InputError when
/// the events are not sorted by timestamp.
std::vector<Burst> aggregate(std::span<const PrfEvent> events, double gap = kDefaultBurstGap);

/// Probing instants of `bursts`, in order.
std::vector<double> probing_instants(std::span<const Burst> bursts);

}  // namespace ratecount
