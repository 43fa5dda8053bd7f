#pragma once

#include <optional>
#include <string>

#include "ratecount/mac_address.hpp"

namespace ratecount {

/// One received probe request frame.
struct PrfEvent {
  double timestamp = 0.0;  // seconds since epoch, microsecond resolution
  MacAddress mac;
  std::string ap_id;
  std::optional<int> rssi;  // dBm

  friend bool operator==(const PrfEvent&, const PrfEvent&) = default;
};

}  // namespace ratecount
