#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratecount/distribution.hpp"
#include "ratecount/interval_model.hpp"
#include "ratecount/prf_event.hpp"
#include "ratecount/rate_counter.hpp"

namespace ratecount {

/// How a device's first probing instant relates to its entry time.
enum class PhaseMode {
  /// Entry at a random point of a stationary renewal process: the first
  /// instant follows the equilibrium residual time.
  Equilibrium,
  /// Probing restarts on entry: the first instant is one full interval later.
  Ordinary,
};

struct FrameRange {
  unsigned min = 1;
  unsigned max = 1;
};

struct SimConfig {
  double arrival_rate = 1.0 / 12.0;  // persons per second (Poisson)
  Distribution dwell = Distribution::exponential(600.0);
  Distribution interval = Distribution::exponential(60.0);
  double burst_duration = 1.0;
  FrameRange frames_per_burst{1, 3};
  CountDistribution devices_per_person = CountDistribution::constant(1);
  double rotation_prob = 0.0;
  PhaseMode phase_mode = PhaseMode::Equilibrium;
  double duration = 3600.0;
  std::uint64_t seed = 1;
  /// Devices present for the whole run, each carried by its own person.
  unsigned resident_devices = 0;
  /// Per-device interval scale drawn from U[1 - spread, 1 + spread]; 0 gives a
  /// homogeneous population.
  double interval_spread = 0.0;
  int rssi = -60;
  std::string ap_id = "sim";

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;

  std::string serialize() const;
  /// Reads a `key = value` document; keys not present keep their defaults.
  static SimConfig parse(std::string_view text, const std::string& base_dir = "");
};

enum class EntityKind { Device, Person };

/// Presence of one device or person in the counting area over [enter, leave).
struct EntityRecord {
  std::uint64_t entity_id = 0;
  EntityKind kind = EntityKind::Device;
  std::optional<std::uint64_t> owner;  // person id, devices only
  double enter = 0.0;
  double leave = 0.0;

  friend bool operator==(const EntityRecord&, const EntityRecord&) = default;
};

struct GroundTruthTrace {
  std::vector<EntityRecord> entities;

  /// One `entity_id kind owner x y` line per entity; owner is `-` for persons.
  std::string serialize() const;
  static GroundTruthTrace deserialize(std::string_view text);

  /// Sum of device dwell times.
  double total_device_dwell() const;
};

/// True probing instant of a simulated burst.
struct ProbeRecord {
  std::uint64_t device_id = 0;
  double instant = 0.0;
  MacAddress mac;
};

struct SimResult {
  std::vector<PrfEvent> events;     // sorted by timestamp
  GroundTruthTrace trace;
  std::vector<ProbeRecord> probes;  // sorted by instant
};

/// Generates a synthetic probe-request trace with exact ground truth. Output is
/// a pure function of the configuration, seed included.
SimResult simulate(const SimConfig& config);

/// Probing instants labelled by true device id, for interval extraction
/// without MAC rotation effects.
std::vector<KeyedInstant> device_instants(std::span<const ProbeRecord> probes);

struct GroundTruthCounts {
  double n_bar = 0.0;  // window-averaged devices
  double m_bar = 0.0;  // window-averaged persons
};

/// Exact window averages of the device and person counts.
GroundTruthCounts ground_truth_window(const GroundTruthTrace& trace, const Window& window);

/// Ground truth for several windows at once.
std::vector<GroundTruthCounts> ground_truth_windows(const GroundTruthTrace& trace,
                                                    std::span<const Window> windows);

/// A device whose probing instants t0 < t1 < t2 < t3 are spaced by the given
/// intervals and which enters uniformly in (t0, t1) and leaves uniformly in
/// (t2, t3), so it is seen for exactly the two bursts at t1 and t2.
struct TwoBurstTrial {
  std::array<double, 4> instants{};
  double enter = 0.0;
  double leave = 0.0;
};
TwoBurstTrial two_burst_trial(Rng& rng, double tau1, double tau2, double tau3);

}  // namespace ratecount
