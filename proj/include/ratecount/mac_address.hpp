#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ratecount {

/// 48-bit IEEE 802 MAC address.
class MacAddress {
 public:
  using Octets = std::array<std::uint8_t, 6>;

  constexpr MacAddress() = default;
  constexpr explicit MacAddress(const Octets& octets) : octets_(octets) {}

  /// Parses "aa:bb:cc:dd:ee:ff" (hex digits in either case). Returns nullopt on
  /// anything else.
  static std::optional<MacAddress> parse(std::string_view text);

  /// Lowercase colon-separated form.
  std::string to_string() const;

  constexpr const Octets& octets() const { return octets_; }

  constexpr bool locally_administered() const { return (octets_[0] & 0x02) != 0; }
  constexpr bool multicast() const { return (octets_[0] & 0x01) != 0; }

  /// Packs the octets big-endian into the low 48 bits.
  constexpr std::uint64_t to_u64() const {
    std::uint64_t v = 0;
    for (auto o : octets_) v = (v << 8) | o;
    return v;
  }
  static constexpr MacAddress from_u64(std::uint64_t v) {
    Octets o{};
    for (int i = 5; i >= 0; --i) {
      o[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
      v >>= 8;
    }
    return MacAddress(o);
  }

  friend constexpr auto operator<=>(const MacAddress&, const MacAddress&) = default;

 private:
  Octets octets_{};
};

/// True for a locally-administered unicast address, i.e. a fabricated
/// (randomized) MAC. Depends on octet 0 only.
constexpr bool is_randomized(const MacAddress& mac) {
  return mac.locally_administered() && !mac.multicast();
}

}  // namespace ratecount

template <>
struct std::hash<ratecount::MacAddress> {
  std::size_t operator()(const ratecount::MacAddress& mac) const noexcept {
    return std::hash<std::uint64_t>{}(mac.to_u64());
  }
};
