#include "ratecount/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ratecount/error.hpp"

namespace ratecount {
namespace {

constexpr std::uint32_t kMagicMicros = 0xa1b2c3d4;
constexpr std::uint32_t kMagicMicrosSwapped = 0xd4c3b2a1;
constexpr std::size_t kGlobalHeaderSize = 24;
constexpr std::size_t kRecordHeaderSize = 16;

std::uint16_t load_u16_le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint32_t load_u32_be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

struct RadiotapInfo {
  std::size_t header_length = 0;
  std::optional<int> antenna_signal;
};

// Walks the first present bitmap up to the dBm antenna-signal field (bit 5).
RadiotapInfo parse_radiotap(std::span<const std::uint8_t> pkt, std::size_t file_offset) {
  if (pkt.size() < 8) throw CaptureParseError(file_offset, "radiotap header truncated");
  RadiotapInfo info;
  info.header_length = load_u16_le(pkt.data() + 2);
  if (info.header_length < 8 || info.header_length > pkt.size()) {
    throw CaptureParseError(file_offset, "radiotap length " + std::to_string(info.header_length) +
                                             " exceeds packet");
  }
  const std::uint32_t present = load_u32_le(pkt.data() + 4);
  std::size_t pos = 8;
  for (std::uint32_t word = present; word & 0x80000000u;) {
    if (pos + 4 > info.header_length) return info;
    word = load_u32_le(pkt.data() + pos);
    pos += 4;
  }
  struct Field {
    std::size_t size, align;
  };
  // TSFT, Flags, Rate, Channel, FHSS, dBm antenna signal
  static constexpr Field kFields[] = {{8, 8}, {1, 1}, {1, 1}, {4, 2}, {2, 1}, {1, 1}};
  for (std::size_t bit = 0; bit < 6; ++bit) {
    if (!(present & (1u << bit))) continue;
    const auto [size, align] = kFields[bit];
    pos = (pos + align - 1) / align * align;
    if (pos + size > info.header_length) return info;
    if (bit == 5) info.antenna_signal = static_cast<std::int8_t>(pkt[pos]);
    pos += size;
  }
  return info;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

void sort_by_time(std::vector<PrfEvent>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const PrfEvent& a, const PrfEvent& b) { return a.timestamp < b.timestamp; });
}

}  // namespace

double quantize_timestamp(double seconds) {
  return static_cast<double>(std::llround(seconds * 1e6)) / 1e6;
}

bool looks_like_capture(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) return false;
  const auto magic = load_u32_le(bytes.data());
  return magic == kMagicMicros || magic == kMagicMicrosSwapped;
}

std::vector<PrfEvent> parse_capture(std::span<const std::uint8_t> bytes,
                                    const std::string& ap_id) {
  if (bytes.size() < kGlobalHeaderSize) {
    throw CaptureParseError(0, "capture global header truncated (" +
                                   std::to_string(bytes.size()) + " bytes)");
  }
  const std::uint32_t magic = load_u32_le(bytes.data());
  bool little_endian;
  if (magic == kMagicMicros) {
    little_endian = true;
  } else if (magic == kMagicMicrosSwapped) {
    little_endian = false;
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw CaptureParseError(0, std::string("bad capture magic ") + buf);
  }
  auto u32 = [little_endian](const std::uint8_t* p) {
    return little_endian ? load_u32_le(p) : load_u32_be(p);
  };

  const std::uint32_t link_type = u32(bytes.data() + 20);
  if (link_type != kLinkTypeIeee80211 && link_type != kLinkTypeRadiotap) {
    throw CaptureParseError(20, "unsupported link type " + std::to_string(link_type));
  }

  std::vector<PrfEvent> events;
  std::size_t offset = kGlobalHeaderSize;
  while (offset < bytes.size()) {
    if (bytes.size() - offset < kRecordHeaderSize) {
      throw CaptureParseError(offset, "truncated packet record header");
    }
    const std::uint8_t* rec = bytes.data() + offset;
    const std::uint32_t ts_sec = u32(rec);
    const std::uint32_t ts_usec = u32(rec + 4);
    const std::uint32_t incl_len = u32(rec + 8);
    const std::size_t data_offset = offset + kRecordHeaderSize;
    if (bytes.size() - data_offset < incl_len) {
      throw CaptureParseError(offset, "truncated packet record: " + std::to_string(incl_len) +
                                          " bytes declared, " +
                                          std::to_string(bytes.size() - data_offset) +
                                          " available");
    }
    auto pkt = bytes.subspan(data_offset, incl_len);
    offset = data_offset + incl_len;

    std::optional<int> rssi;
    if (link_type == kLinkTypeRadiotap) {
      const auto rt = parse_radiotap(pkt, data_offset);
      rssi = rt.antenna_signal;
      pkt = pkt.subspan(rt.header_length);
    }
    if (pkt.size() < 16) continue;
    const std::uint8_t fc = pkt[0];
    const unsigned version = fc & 0x03;
    const unsigned type = (fc >> 2) & 0x03;
    const unsigned subtype = (fc >> 4) & 0x0f;
    if (version != 0 || type != 0 || subtype != 4) continue;

    MacAddress::Octets sa{};
    std::copy_n(pkt.begin() + 10, 6, sa.begin());
    const auto micros = static_cast<std::int64_t>(ts_sec) * 1000000 + ts_usec;
    events.push_back(PrfEvent{static_cast<double>(micros) / 1e6, MacAddress(sa), ap_id, rssi});
  }
  sort_by_time(events);
  return events;
}

std::vector<PrfEvent> parse_events(std::string_view text) {
  std::vector<PrfEvent> events;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (fields.size() < 3 || fields.size() > 4) {
      throw LineParseError(line_no, "expected 3 or 4 fields, got " + std::to_string(fields.size()));
    }
    PrfEvent ev;
    const auto ts = fields[0];
    auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), ev.timestamp);
    if (ec != std::errc() || ptr != ts.data() + ts.size()) {
      throw LineParseError(line_no, "malformed timestamp '" + std::string(ts) + "'");
    }
    if (!std::isfinite(ev.timestamp)) {
      throw LineParseError(line_no, "non-finite timestamp '" + std::string(ts) + "'");
    }
    if (ev.timestamp < 0) {
      throw LineParseError(line_no, "negative timestamp '" + std::string(ts) + "'");
    }
    ev.timestamp = quantize_timestamp(ev.timestamp);
    const auto mac = MacAddress::parse(fields[1]);
    if (!mac) throw LineParseError(line_no, "malformed MAC '" + std::string(fields[1]) + "'");
    ev.mac = *mac;
    ev.ap_id = std::string(fields[2]);
    if (fields.size() == 4) {
      int rssi = 0;
      const auto f = fields[3];
      auto [p, e] = std::from_chars(f.data(), f.data() + f.size(), rssi);
      if (e != std::errc() || p != f.data() + f.size()) {
        throw LineParseError(line_no, "malformed rssi '" + std::string(f) + "'");
      }
      ev.rssi = rssi;
    }
    events.push_back(std::move(ev));
  }
  sort_by_time(events);
  return events;
}

std::string format_events(std::span<const PrfEvent> events) {
  std::string out;
  out.reserve(events.size() * 48);
  char buf[64];
  for (const auto& ev : events) {
    const long long micros = std::llround(ev.timestamp * 1e6);
    std::snprintf(buf, sizeof buf, "%lld.%06lld ", micros / 1000000, micros % 1000000);
    out += buf;
    out += ev.mac.to_string();
    out += ' ';
    out += ev.ap_id;
    if (ev.rssi) {
      out += ' ';
      out += std::to_string(*ev.rssi);
    }
    out += '\n';
  }
  return out;
}

}  // namespace ratecount
