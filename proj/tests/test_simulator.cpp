#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ratecount/error.hpp"
#include "ratecount/interval_model.hpp"
#include "ratecount/rate_counter.hpp"
#include "ratecount/simulator.hpp"

using namespace ratecount;

namespace {

EntityRecord device(std::uint64_t id, double x, double y) {
  return {id, EntityKind::Device, 1000 + id, x, y};
}

// Midpoint Riemann sum of N(t) over the window at 1 ms resolution.
double riemann_n_bar(const GroundTruthTrace& trace, const Window& w) {
  const double dt = 1e-3;
  const auto steps = static_cast<long>(std::llround(w.size / dt));
  double sum = 0;
  for (long k = 0; k < steps; ++k) {
    const double t = w.start + (static_cast<double>(k) + 0.5) * dt;
    for (const auto& e : trace.entities) {
      if (e.kind == EntityKind::Device && t >= e.enter && t < e.leave) sum += 1;
    }
  }
  return sum * dt / w.size;
}

double sample_mean(const Distribution& d, double (Distribution::*draw)(Rng&) const, int n,
                   std::uint64_t seed) {
  Rng rng(seed);
  double s = 0;
  for (int i = 0; i < n; ++i) s += (d.*draw)(rng);
  return s / n;
}

}  // namespace

TEST_CASE("window-averaged count example") {
  GroundTruthTrace trace;
  trace.entities = {device(1, 0, 100), device(2, 0, 100), device(3, 50, 100)};
  CHECK(std::abs(ground_truth_window(trace, {0, 100}).n_bar - 2.5) <= 1e-9);
  CHECK(ground_truth_window(GroundTruthTrace{}, {0, 100}).n_bar == 0.0);
  CHECK(ground_truth_window(GroundTruthTrace{}, {0, 100}).m_bar == 0.0);
}

TEST_CASE("window-averaged count agrees with a Riemann sum") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 400);
  for (int trial = 0; trial < 10; ++trial) {
    GroundTruthTrace trace;
    for (std::uint64_t i = 0; i < 15; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      trace.entities.push_back(device(i, a, b));
    }
    const Window w{100 + 10.0 * trial, 150};
    CHECK(std::abs(ground_truth_window(trace, w).n_bar - riemann_n_bar(trace, w)) < 1e-3);
  }
}

TEST_CASE("ground truth additivity and window partition") {
  SimConfig cfg;
  cfg.duration = 7200;
  cfg.seed = 5;
  cfg.devices_per_person = CountDistribution::poisson(1.3);
  const auto sim = simulate(cfg);

  GroundTruthTrace a, b;
  for (std::size_t i = 0; i < sim.trace.entities.size(); ++i) {
    (i % 3 == 0 ? a : b).entities.push_back(sim.trace.entities[i]);
  }
  const Window whole{0, cfg.duration};
  const auto all = ground_truth_window(sim.trace, whole);
  CHECK(ground_truth_window(a, whole).n_bar + ground_truth_window(b, whole).n_bar ==
        doctest::Approx(all.n_bar).epsilon(1e-12));
  CHECK(ground_truth_window(a, whole).m_bar + ground_truth_window(b, whole).m_bar ==
        doctest::Approx(all.m_bar).epsilon(1e-12));

  const auto windows = window_span(0, cfg.duration, 360, 360);
  const auto per = ground_truth_windows(sim.trace, windows);
  double weighted = 0, weighted_m = 0;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    weighted += per[j].n_bar * windows[j].size;
    weighted_m += per[j].m_bar * windows[j].size;
    CHECK(per[j].n_bar == doctest::Approx(ground_truth_window(sim.trace, windows[j]).n_bar));
  }
  CHECK(weighted / cfg.duration == doctest::Approx(all.n_bar).epsilon(1e-12));
  CHECK(weighted_m / cfg.duration == doctest::Approx(all.m_bar).epsilon(1e-12));
}

TEST_CASE("simulation is deterministic given the seed") {
  SimConfig cfg;
  cfg.duration = 1800;
  cfg.rotation_prob = 0.3;
  cfg.seed = 1234;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.events == b.events);
  CHECK(a.trace.entities == b.trace.entities);
  cfg.seed = 1235;
  CHECK(simulate(cfg).events != a.events);
}

TEST_CASE("zero duration gives empty outputs") {
  SimConfig cfg;
  cfg.duration = 0;
  cfg.resident_devices = 3;
  const auto sim = simulate(cfg);
  CHECK(sim.events.empty());
  CHECK(sim.probes.empty());
  CHECK(sim.trace.entities.empty());
}

TEST_CASE("trace structure") {
  SimConfig cfg;
  cfg.duration = 3600;
  cfg.devices_per_person = CountDistribution::poisson(1.5);
  cfg.rotation_prob = 0.5;
  cfg.seed = 8;
  const auto sim = simulate(cfg);
  std::map<std::uint64_t, EntityRecord> persons;
  for (const auto& e : sim.trace.entities) {
    CHECK(e.enter < e.leave);
    if (e.kind == EntityKind::Person) persons[e.entity_id] = e;
  }
  std::map<std::uint64_t, EntityRecord> devices;
  for (const auto& e : sim.trace.entities) {
    if (e.kind != EntityKind::Device) continue;
    devices[e.entity_id] = e;
    REQUIRE(e.owner);
    REQUIRE(persons.contains(*e.owner));
    CHECK(persons[*e.owner].enter == e.enter);
    CHECK(persons[*e.owner].leave == e.leave);
  }
  for (const auto& p : sim.probes) {
    REQUIRE(devices.contains(p.device_id));
    CHECK(p.instant >= devices[p.device_id].enter);
    CHECK(p.instant < devices[p.device_id].leave);
  }
  for (std::size_t i = 1; i < sim.events.size(); ++i) {
    CHECK(sim.events[i - 1].timestamp <= sim.events[i].timestamp);
  }
  CHECK(GroundTruthTrace::deserialize(sim.trace.serialize()).entities == sim.trace.entities);
}

TEST_CASE("rotated MACs are randomized, persistent MACs are not") {
  SimConfig cfg;
  cfg.duration = 3600;
  cfg.rotation_prob = 1.0;
  for (const auto& e : simulate(cfg).events) CHECK(is_randomized(e.mac));
  cfg.rotation_prob = 0.0;
  for (const auto& e : simulate(cfg).events) CHECK_FALSE(is_randomized(e.mac));
}

TEST_CASE("generated intervals match the configured distribution") {
  for (const auto& dist : {Distribution::exponential(60), Distribution::lognormal_with_mean(60, 0.5)}) {
    SimConfig cfg;
    cfg.arrival_rate = 0;
    cfg.resident_devices = 100;
    cfg.interval = dist;
    cfg.duration = 60.0 * 2000;
    cfg.seed = 3;
    const auto sim = simulate(cfg);
    const auto samples = extract_intervals(device_instants(sim.probes), 1e12);
    REQUIRE(samples.size() >= 150000);
    FitOptions opts;
    opts.cutoff = 1e12;
    const auto m = fit(samples, opts);
    CHECK(std::abs(m.tau_mean / dist.mean() - 1) < 0.01);
    CHECK(std::abs(m.tau_std / dist.stddev() - 1) < 0.01);
  }
}

TEST_CASE("always-present device probes at the mean rate") {
  const double tau = 60, span = 1e4 * tau;
  double total = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig cfg;
    cfg.arrival_rate = 0;
    cfg.resident_devices = 1;
    cfg.phase_mode = PhaseMode::Ordinary;
    cfg.duration = span;
    cfg.seed = seed;
    total += static_cast<double>(simulate(cfg).probes.size());
  }
  const double rate = total / 10 / span;
  CHECK(std::abs(rate * tau - 1) < 0.01);
}

TEST_CASE("total dwell matches burst count times mean interval") {
  SimConfig cfg;
  cfg.duration = 1e5;
  cfg.seed = 21;
  const auto sim = simulate(cfg);
  const double d = sim.trace.total_device_dwell();
  const double b_tau = static_cast<double>(sim.probes.size()) * cfg.interval.mean();
  CHECK(std::abs(d - b_tau) / d <= 0.02);
}

TEST_CASE("two-burst trial dwell expectation") {
  Rng rng(13);
  const double t1 = 40, t2 = 60, t3 = 80;
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto t = two_burst_trial(rng, t1, t2, t3);
    int inside = 0;
    for (double s : t.instants) inside += (s >= t.enter && s < t.leave);
    CHECK(inside == 2);
    sum += t.leave - t.enter;
  }
  CHECK(std::abs(sum / n - (t1 + 2 * t2 + t3) / 2) / ((t1 + 2 * t2 + t3) / 2) < 0.02);
  CHECK_THROWS_AS(two_burst_trial(rng, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("distribution moments and residual law") {
  IntervalModel hist_model;
  hist_model.bin_width = 10;
  hist_model.histogram = {0, 3, 5, 2, 0, 1};
  hist_model.sample_count = 11;
  hist_model.tau_mean = 1;

  const std::vector<Distribution> dists = {
      Distribution::exponential(60), Distribution::lognormal_with_mean(60, 0.5),
      Distribution::constant(60), Distribution::uniform(30, 90),
      Distribution::histogram(hist_model)};
  std::uint64_t seed = 100;
  for (const auto& d : dists) {
    CAPTURE(d.to_string());
    // Oracle moments: E[x] and E[x^2] from closed forms per family.
    double m1 = 0, m2 = 0;
    if (std::holds_alternative<Distribution::Exponential>(d.kind())) {
      m1 = 60, m2 = 2 * 3600;
    } else if (std::holds_alternative<Distribution::LogNormal>(d.kind())) {
      m1 = 60, m2 = 3600 * std::exp(0.25);
    } else if (std::holds_alternative<Distribution::Constant>(d.kind())) {
      m1 = 60, m2 = 3600;
    } else if (std::holds_alternative<Distribution::Uniform>(d.kind())) {
      m1 = 60, m2 = (90.0 * 90 * 90 - 30.0 * 30 * 30) / (3 * 60);
    } else {
      double n = 0;
      for (std::size_t i = 0; i < hist_model.histogram.size(); ++i) {
        const double a = 10.0 * static_cast<double>(i), b = a + 10;
        const auto c = static_cast<double>(hist_model.histogram[i]);
        n += c;
        m1 += c * (a + b) / 2;
        m2 += c * (b * b * b - a * a * a) / (3 * 10);
      }
      m1 /= n;
      m2 /= n;
    }
    CHECK(d.mean() == doctest::Approx(m1).epsilon(1e-12));
    CHECK(d.stddev() == doctest::Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-12));
    const int n = 400000;
    CHECK(sample_mean(d, &Distribution::sample, n, ++seed) == doctest::Approx(m1).epsilon(0.01));
    // Length-biased mean is E[x^2]/E[x]; the residual mean is half of it.
    CHECK(sample_mean(d, &Distribution::sample_length_biased, n, ++seed) ==
          doctest::Approx(m2 / m1).epsilon(0.01));
    CHECK(sample_mean(d, &Distribution::sample_residual, n, ++seed) ==
          doctest::Approx(m2 / (2 * m1)).epsilon(0.01));
  }
}

TEST_CASE("count distributions") {
  Rng rng(4);
  const auto p = CountDistribution::poisson(1.14);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double k = p.sample(rng);
    s += k;
    s2 += k * k;
  }
  const double mean = s / n;
  CHECK(mean == doctest::Approx(1.14).epsilon(0.01));
  CHECK(s2 / n - mean * mean == doctest::Approx(1.14).epsilon(0.02));

  const auto big = CountDistribution::poisson(75);
  s = 0;
  for (int i = 0; i < 20000; ++i) s += big.sample(rng);
  CHECK(s / 20000 == doctest::Approx(75).epsilon(0.01));

  CHECK(CountDistribution::parse("3").sample(rng) == 3);
  CHECK(CountDistribution::parse("const:k=2").mean() == 2);
  CHECK(CountDistribution::parse("poisson:mean=1.5").mean() == 1.5);
  CHECK_THROWS_AS(CountDistribution::parse("poisson"), InputError);
}

TEST_CASE("distribution spec parsing") {
  CHECK(Distribution::parse("exp:mean=60").mean() == 60);
  CHECK(Distribution::parse("lognormal:mean=60,sigma=0.5").mean() == doctest::Approx(60));
  CHECK(Distribution::parse("lognormal:mu=4,sigma=0.5").mean() == doctest::Approx(std::exp(4.125)));
  CHECK(Distribution::parse("const:value=30").mean() == 30);
  CHECK(Distribution::parse("uniform:min=10,max=20").mean() == 15);
  for (const char* spec : {"exp:mean=60", "lognormal:mu=4,sigma=0.5", "const:value=30",
                           "uniform:min=10,max=20"}) {
    CHECK(Distribution::parse(spec).to_string() == spec);
  }
  CHECK_THROWS_AS(Distribution::parse("exp:mean=-1"), InputError);
  CHECK_THROWS_AS(Distribution::parse("gamma:k=2"), InputError);
  CHECK_THROWS_AS(Distribution::parse("exp"), InputError);
  CHECK_THROWS_AS(Distribution::parse("hist:/nonexistent/model.txt"), InputError);
}

TEST_CASE("sim config text form") {
  SimConfig cfg;
  cfg.arrival_rate = 0.5;
  cfg.interval = Distribution::lognormal(4, 0.3);
  cfg.frames_per_burst = {2, 5};
  cfg.devices_per_person = CountDistribution::poisson(1.14);
  cfg.rotation_prob = 0.25;
  cfg.phase_mode = PhaseMode::Ordinary;
  cfg.seed = 77;
  const auto text = cfg.serialize();
  CHECK(SimConfig::parse(text).serialize() == text);

  const auto c = SimConfig::parse("duration = 60\nframes_per_burst = 2\n# note\n");
  CHECK(c.duration == 60);
  CHECK(c.frames_per_burst.min == 2);
  CHECK(c.frames_per_burst.max == 2);
  CHECK_THROWS_AS(SimConfig::parse("color = red\n"), InputError);
  CHECK_THROWS_AS(SimConfig::parse("rotation_prob = 2\n"), InputError);
  CHECK_THROWS_AS(SimConfig::parse("phase_mode = odd\n"), InputError);
  CHECK_THROWS_AS(SimConfig::parse("frames_per_burst = 3-1\n"), InputError);
}
