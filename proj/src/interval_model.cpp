#include "ratecount/interval_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ratecount/error.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount {

std::vector<IntervalSample> extract_intervals(std::span<const KeyedInstant> instants,
                                              double cutoff) {
  if (!(cutoff > 0)) throw std::invalid_argument("interval cutoff must be positive");
  std::vector<IntervalSample> out;
  std::unordered_map<std::string_view, double> last;
  for (const auto& ki : instants) {
    auto [it, inserted] = last.try_emplace(ki.key, ki.instant);
    if (inserted) continue;
    const double tau = ki.instant - it->second;
    it->second = ki.instant;
    if (tau > 0 && tau <= cutoff) out.push_back({tau, ki.key});
  }
  return out;
}

std::vector<IntervalSample> extract_intervals(std::span<const Burst> bursts, double cutoff) {
  std::vector<KeyedInstant> keyed;
  keyed.reserve(bursts.size());
  for (const auto& b : bursts) keyed.push_back({b.mac.to_string(), b.probing_instant});
  return extract_intervals(std::span<const KeyedInstant>(keyed), cutoff);
}

constexpr double kMaxHistogramBins = 1e7;

IntervalModel fit(std::span<const double> taus, const FitOptions& options) {
  if (taus.size() < 2) throw InsufficientData("insufficient interval samples");
  if (!(options.bin_width > 0)) throw std::invalid_argument("bin width must be positive");

  const double n = static_cast<double>(taus.size());
  const double mean = std::accumulate(taus.begin(), taus.end(), 0.0) / n;
  double ss = 0;
  for (double t : taus) ss += (t - mean) * (t - mean);

  IntervalModel model;
  model.area_id = options.area_id;
  model.tau_mean = mean;
  model.tau_std = std::sqrt(ss / (n - 1));
  model.sample_count = taus.size();
  model.bin_width = options.bin_width;

  const double top = std::floor(*std::max_element(taus.begin(), taus.end()) / options.bin_width);
  if (!(top < kMaxHistogramBins)) throw std::invalid_argument("bin width too small for the sample range");
  const auto bins = static_cast<std::size_t>(std::max(0.0, top)) + 1;
  model.histogram.assign(bins, 0);
  for (double t : taus) {
    auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(t / options.bin_width)));
    ++model.histogram[std::min(bin, bins - 1)];
  }
  return model;
}

IntervalModel fit(std::span<const IntervalSample> samples, const FitOptions& options) {
  std::vector<double> taus;
  taus.reserve(samples.size());
  for (const auto& s : samples) taus.push_back(s.tau);
  return fit(std::span<const double>(taus), options);
}

std::string IntervalModel::serialize() const {
  std::ostringstream out;
  out << "# probing-interval model\n";
  out << "area_id = " << area_id << '\n';
  out << "tau_mean = " << format_real(tau_mean) << '\n';
  out << "tau_std = " << format_real(tau_std) << '\n';
  out << "sample_count = " << sample_count << '\n';
  out << "bin_width = " << format_real(bin_width) << '\n';
  out << "histogram =";
  for (auto c : histogram) out << ' ' << c;
  out << '\n';
  return out.str();
}

IntervalModel IntervalModel::deserialize(std::string_view text) {
  const auto doc = KeyValueDoc::parse(text);
  IntervalModel m;
  m.area_id = doc.at("area_id");
  m.tau_mean = doc.real("tau_mean");
  m.tau_std = doc.real("tau_std");
  const auto count = doc.integer("sample_count");
  if (count < 0) throw InputError("negative sample_count");
  m.sample_count = static_cast<std::size_t>(count);
  m.bin_width = doc.real("bin_width");

  std::istringstream hist(doc.at("histogram"));
  std::string tok;
  std::uint64_t total = 0;
  while (hist >> tok) {
    const double v = parse_real(tok, "histogram count");
    if (v < 0 || v != std::floor(v)) throw InputError("histogram counts must be non-negative integers");
    m.histogram.push_back(static_cast<std::uint64_t>(v));
    total += m.histogram.back();
  }
  if (total != m.sample_count) throw InputError("histogram counts do not sum to sample_count");
  if (m.sample_count > 0 && !(m.tau_mean > 0)) throw InputError("tau_mean must be positive");
  if (!(m.tau_std >= 0)) throw InputError("tau_std must be non-negative");
  if (!(m.bin_width > 0)) throw InputError("bin_width must be positive");
  return m;
}

}  // namespace ratecount
