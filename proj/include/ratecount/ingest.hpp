#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratecount/prf_event.hpp"

namespace ratecount {

inline constexpr std::uint32_t kLinkTypeIeee80211 = 105;
inline constexpr std::uint32_t kLinkTypeRadiotap = 127;

/// Extracts probe-request events from a classic (24-byte header, microsecond)
/// capture file. Link types 105 (bare 802.11) and 127 (radiotap + 802.11) are
/// accepted; every other frame type is skipped. The source address comes from
/// address 2 of the MAC header and rssi from the radiotap dBm antenna-signal
/// field when present. All events are tagged with `ap_id`.
///
/// Throws CaptureParseError on a malformed global header, a truncated record or
/// an unsupported link type. The result is stably sorted by timestamp.
std::vector<PrfEvent> parse_capture(std::span<const std::uint8_t> bytes,
                                    const std::string& ap_id = "capture");

/// Parses the line-oriented event format:
///   <timestamp> <mac> <ap_id> [rssi]
/// Blank lines and lines starting with '#' are ignored. Throws LineParseError
/// naming the offending line. The result is stably sorted by timestamp.
std::vector<PrfEvent> parse_events(std::string_view text);

/// Serializes events in the format read by parse_events, one per line with
/// timestamps printed to exactly six decimals.
std::string format_events(std::span<const PrfEvent> events);

/// True when the first four bytes carry a classic capture magic number.
bool looks_like_capture(std::span<const std::uint8_t> bytes);

/// Rounds a timestamp to the microsecond grid used by both parsers.
double quantize_timestamp(double seconds);

}  // namespace ratecount
