#include "ratecount/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ratecount/error.hpp"
#include "ratecount/ingest.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount {
namespace {

MacAddress random_mac(Rng& rng, bool locally_administered) {
  auto mac = MacAddress::from_u64(rng() & 0xffffffffffffULL);
  auto octets = mac.octets();
  octets[0] &= 0xfc;  // unicast, globally unique
  if (locally_administered) octets[0] |= 0x02;
  return MacAddress(octets);
}

class Generator {
 public:
  explicit Generator(const SimConfig& config) : cfg_(config), rng_(config.seed) {}

  SimResult run() {
    if (!(cfg_.duration > 0)) return std::move(out_);
    for (unsigned i = 0; i < cfg_.resident_devices; ++i) {
      const auto person = add_person(0.0, cfg_.duration);
      add_device(person, 0.0, cfg_.duration);
    }
    if (cfg_.arrival_rate > 0) {
      double t = 0.0;
      while (true) {
        t += -std::log1p(-uniform01(rng_)) / cfg_.arrival_rate;
        if (t >= cfg_.duration) break;
        const double leave = std::min(t + cfg_.dwell.sample(rng_), cfg_.duration);
        const unsigned devices = cfg_.devices_per_person.sample(rng_);
        if (!(leave > t)) continue;
        const auto person = add_person(t, leave);
        for (unsigned d = 0; d < devices; ++d) add_device(person, t, leave);
      }
    }
    auto by_time = [](const PrfEvent& a, const PrfEvent& b) { return a.timestamp < b.timestamp; };
    std::stable_sort(out_.events.begin(), out_.events.end(), by_time);
    std::stable_sort(out_.probes.begin(), out_.probes.end(),
                     [](const ProbeRecord& a, const ProbeRecord& b) { return a.instant < b.instant; });
    return std::move(out_);
  }

 private:
  std::uint64_t add_person(double enter, double leave) {
    const auto id = next_id_++;
    out_.trace.entities.push_back({id, EntityKind::Person, std::nullopt, enter, leave});
    return id;
  }

  void add_device(std::uint64_t owner, double enter, double leave) {
    const auto id = next_id_++;
    out_.trace.entities.push_back({id, EntityKind::Device, owner, enter, leave});
    const MacAddress persistent = random_mac(rng_, false);
    const double scale =
        cfg_.interval_spread > 0 ? 1.0 + cfg_.interval_spread * (2.0 * uniform01(rng_) - 1.0) : 1.0;

    double t = enter + scale * (cfg_.phase_mode == PhaseMode::Equilibrium
                                    ? cfg_.interval.sample_residual(rng_)
                                    : cfg_.interval.sample(rng_));
    while (t < leave) {
      const bool rotate = cfg_.rotation_prob > 0 && uniform01(rng_) < cfg_.rotation_prob;
      const MacAddress mac = rotate ? random_mac(rng_, true) : persistent;
      out_.probes.push_back({id, t, mac});
      emit_burst(t, mac);
      t += scale * cfg_.interval.sample(rng_);
    }
  }

  void emit_burst(double instant, const MacAddress& mac) {
    const unsigned span = cfg_.frames_per_burst.max - cfg_.frames_per_burst.min + 1;
    unsigned frames = cfg_.frames_per_burst.min;
    if (span > 1) frames += static_cast<unsigned>(uniform01(rng_) * span);
    for (unsigned j = 0; j < frames; ++j) {
      const double offset = frames > 1 ? cfg_.burst_duration * j / (frames - 1) : 0.0;
      out_.events.push_back({quantize_timestamp(instant + offset), mac, cfg_.ap_id, cfg_.rssi});
    }
  }

  const SimConfig& cfg_;
  Rng rng_;
  std::uint64_t next_id_ = 0;
  SimResult out_;
};

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("sim config: " + what); };
  if (!(arrival_rate >= 0) || !std::isfinite(arrival_rate)) fail("arrival_rate must be >= 0");
  if (!(duration >= 0) || !std::isfinite(duration)) fail("duration must be >= 0");
  if (!(burst_duration >= 0)) fail("burst_duration must be >= 0");
  if (frames_per_burst.min < 1 || frames_per_burst.max < frames_per_burst.min) {
    fail("frames_per_burst must satisfy 1 <= min <= max");
  }
  if (!(rotation_prob >= 0 && rotation_prob <= 1)) fail("rotation_prob must be in [0, 1]");
  if (!(interval_spread >= 0 && interval_spread < 1)) fail("interval_spread must be in [0, 1)");
  if (ap_id.empty() || ap_id.find_first_of(" \t\n") != std::string::npos) {
    fail("ap_id must be a non-empty token");
  }
}

std::string SimConfig::serialize() const {
  std::ostringstream out;
  out << "arrival_rate = " << format_real(arrival_rate) << '\n';
  out << "dwell = " << dwell.to_string() << '\n';
  out << "interval = " << interval.to_string() << '\n';
  out << "burst_duration = " << format_real(burst_duration) << '\n';
  out << "frames_per_burst = " << frames_per_burst.min << '-' << frames_per_burst.max << '\n';
  out << "devices_per_person = " << devices_per_person.to_string() << '\n';
  out << "rotation_prob = " << format_real(rotation_prob) << '\n';
  out << "phase_mode = " << (phase_mode == PhaseMode::Equilibrium ? "equilibrium" : "ordinary")
      << '\n';
  out << "duration = " << format_real(duration) << '\n';
  out << "seed = " << seed << '\n';
  out << "resident_devices = " << resident_devices << '\n';
  out << "interval_spread = " << format_real(interval_spread) << '\n';
  out << "rssi = " << rssi << '\n';
  out << "ap_id = " << ap_id << '\n';
  return out.str();
}

SimConfig SimConfig::parse(std::string_view text, const std::string& base_dir) {
  static const char* const kKnown[] = {
      "arrival_rate",  "dwell",    "interval", "burst_duration",   "frames_per_burst",
      "devices_per_person", "rotation_prob", "phase_mode", "duration", "seed",
      "resident_devices", "interval_spread", "rssi", "ap_id"};
  const auto doc = KeyValueDoc::parse(text);
  for (const auto& [key, value] : doc.entries()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw InputError("unknown sim config key '" + key + "'");
    }
  }
  auto non_negative_int = [&](const std::string& key) {
    const auto v = doc.integer(key);
    if (v < 0) throw InputError(key + " must be non-negative");
    return v;
  };

  SimConfig c;
  if (doc.contains("arrival_rate")) c.arrival_rate = doc.real("arrival_rate");
  if (doc.contains("dwell")) c.dwell = Distribution::parse(doc.at("dwell"), base_dir);
  if (doc.contains("interval")) c.interval = Distribution::parse(doc.at("interval"), base_dir);
  if (doc.contains("burst_duration")) c.burst_duration = doc.real("burst_duration");
  if (doc.contains("frames_per_burst")) {
    const auto& s = doc.at("frames_per_burst");
    const auto dash = s.find('-');
    const auto lo = parse_real(s.substr(0, dash), "frames_per_burst");
    const auto hi = dash == std::string::npos ? lo : parse_real(s.substr(dash + 1), "frames_per_burst");
    if (lo < 1 || hi < lo || lo != std::floor(lo) || hi != std::floor(hi)) {
      throw InputError("frames_per_burst must be 'n' or 'min-max' with 1 <= min <= max");
    }
    c.frames_per_burst = {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
  }
  if (doc.contains("devices_per_person")) {
    c.devices_per_person = CountDistribution::parse(doc.at("devices_per_person"));
  }
  if (doc.contains("rotation_prob")) c.rotation_prob = doc.real("rotation_prob");
  if (doc.contains("phase_mode")) {
    const auto& m = doc.at("phase_mode");
    if (m == "equilibrium") c.phase_mode = PhaseMode::Equilibrium;
    else if (m == "ordinary") c.phase_mode = PhaseMode::Ordinary;
    else throw InputError("phase_mode must be 'equilibrium' or 'ordinary'");
  }
  if (doc.contains("duration")) c.duration = doc.real("duration");
  if (doc.contains("seed")) c.seed = static_cast<std::uint64_t>(non_negative_int("seed"));
  if (doc.contains("resident_devices")) {
    c.resident_devices = static_cast<unsigned>(non_negative_int("resident_devices"));
  }
  if (doc.contains("interval_spread")) c.interval_spread = doc.real("interval_spread");
  if (doc.contains("rssi")) c.rssi = static_cast<int>(doc.integer("rssi"));
  if (doc.contains("ap_id")) c.ap_id = doc.at("ap_id");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return c;
}

std::string GroundTruthTrace::serialize() const {
  std::string out = "# entity_id kind owner x y\n";
  for (const auto& e : entities) {
    out += std::to_string(e.entity_id);
    out += e.kind == EntityKind::Device ? " device " : " person ";
    out += e.owner ? std::to_string(*e.owner) : std::string("-");
    out += ' ' + format_real(e.enter) + ' ' + format_real(e.leave) + '\n';
  }
  return out;
}

GroundTruthTrace GroundTruthTrace::deserialize(std::string_view text) {
  GroundTruthTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string id, kind, owner, x, y, extra;
    if (!(fields >> id >> kind >> owner >> x >> y) || (fields >> extra)) {
      throw LineParseError(line_no, "expected 'entity_id kind owner x y'");
    }
    EntityRecord e;
    try {
      e.entity_id = std::stoull(id);
      if (kind == "device") {
        e.kind = EntityKind::Device;
        e.owner = std::stoull(owner);
      } else if (kind == "person") {
        e.kind = EntityKind::Person;
        if (owner != "-") throw LineParseError(line_no, "person with an owner");
      } else {
        throw LineParseError(line_no, "unknown entity kind '" + kind + "'");
      }
      e.enter = parse_real(x, "enter time");
      e.leave = parse_real(y, "leave time");
    } catch (const std::logic_error&) {
      throw LineParseError(line_no, "malformed entity id");
    } catch (const LineParseError&) {
      throw;
    } catch (const InputError& err) {
      throw LineParseError(line_no, err.what());
    }
    if (!(e.enter < e.leave)) throw LineParseError(line_no, "enter must precede leave");
    trace.entities.push_back(e);
  }
  return trace;
}

double GroundTruthTrace::total_device_dwell() const {
  double d = 0;
  for (const auto& e : entities) {
    if (e.kind == EntityKind::Device) d += e.leave - e.enter;
  }
  return d;
}

SimResult simulate(const SimConfig& config) {
  config.validate();
  return Generator(config).run();
}

std::vector<KeyedInstant> device_instants(std::span<const ProbeRecord> probes) {
  std::vector<KeyedInstant> out;
  out.reserve(probes.size());
  for (const auto& p : probes) out.push_back({std::to_string(p.device_id), p.instant});
  return out;
}

GroundTruthCounts ground_truth_window(const GroundTruthTrace& trace, const Window& window) {
  if (!(window.size > 0)) throw std::invalid_argument("window size must be positive");
  GroundTruthCounts c;
  for (const auto& e : trace.entities) {
    const double o = overlap(e.enter, e.leave, window.start, window.end());
    (e.kind == EntityKind::Device ? c.n_bar : c.m_bar) += o;
  }
  c.n_bar /= window.size;
  c.m_bar /= window.size;
  return c;
}

std::vector<GroundTruthCounts> ground_truth_windows(const GroundTruthTrace& trace,
                                                    std::span<const Window> windows) {
  bool monotone = true;
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (windows[i].start < windows[i - 1].start || windows[i].end() < windows[i - 1].end()) {
      monotone = false;
    }
  }
  std::vector<GroundTruthCounts> out(windows.size());
  if (!monotone) {
    for (std::size_t i = 0; i < windows.size(); ++i) out[i] = ground_truth_window(trace, windows[i]);
    return out;
  }
  for (const auto& w : windows) {
    if (!(w.size > 0)) throw std::invalid_argument("window size must be positive");
  }
  for (const auto& e : trace.entities) {
    auto it = std::upper_bound(windows.begin(), windows.end(), e.enter,
                               [](double t, const Window& w) { return t < w.end(); });
    for (; it != windows.end() && it->start < e.leave; ++it) {
      const double o = overlap(e.enter, e.leave, it->start, it->end());
      auto& c = out[static_cast<std::size_t>(it - windows.begin())];
      (e.kind == EntityKind::Device ? c.n_bar : c.m_bar) += o;
    }
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out[i].n_bar /= windows[i].size;
    out[i].m_bar /= windows[i].size;
  }
  return out;
}

TwoBurstTrial two_burst_trial(Rng& rng, double tau1, double tau2, double tau3) {
  if (!(tau1 > 0 && tau2 > 0 && tau3 > 0)) throw std::invalid_argument("intervals must be positive");
  TwoBurstTrial t;
  t.instants = {0.0, tau1, tau1 + tau2, tau1 + tau2 + tau3};
  t.enter = t.instants[0] + uniform01(rng) * tau1;
  t.leave = t.instants[2] + uniform01(rng) * tau3;
  return t;
}

}  // namespace ratecount
