#include "ratecount/burst.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "ratecount/error.hpp"

namespace ratecount {

std::vector<Burst> aggregate(std::span<const PrfEvent> events, double gap) {
  if (!(gap > 0)) throw std::invalid_argument("burst gap must be positive");

  std::vector<Burst> bursts;
  // Index of the most recent burst for each MAC.
  std::unordered_map<MacAddress, std::size_t> open;
  open.reserve(events.size());
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.timestamp < previous) {
      throw InputError("events not sorted by timestamp at index " + std::to_string(i));
    }
    previous = ev.timestamp;

    auto it = open.find(ev.mac);
    if (it != open.end()) {
      Burst& b = bursts[it->second];
      if (ev.timestamp - b.end_time <= gap) {
        b.end_time = ev.timestamp;
        ++b.frame_count;
        b.ap_ids.insert(ev.ap_id);
        continue;
      }
    }
    open.insert_or_assign(ev.mac, bursts.size());
    bursts.push_back(Burst{ev.mac, ev.timestamp, ev.timestamp, 1, {ev.ap_id}});
  }
  return bursts;
}

std::vector<double> probing_instants(std::span<const Burst> bursts) {
  std::vector<double> out;
  out.reserve(bursts.size());
  for (const auto& b : bursts) out.push_back(b.probing_instant);
  return out;
}

}  // namespace ratecount
