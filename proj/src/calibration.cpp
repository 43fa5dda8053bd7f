#include "ratecount/calibration.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ratecount/error.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount {

namespace {
constexpr double kAlignTolerance = 1e-6;
}

CalibrationRatio estimate_ratio(std::span<const WindowEstimate> device_series,
                                std::span<const PeopleReference> people_series,
                                double nrmse_people_ref) {
  if (device_series.size() != people_series.size()) {
    throw InputError("misaligned series: " + std::to_string(device_series.size()) +
                     " device windows vs " + std::to_string(people_series.size()) +
                     " people windows");
  }
  if (device_series.empty()) throw InsufficientData("empty calibration series");
  if (!(nrmse_people_ref >= 0)) throw std::invalid_argument("reference NRMSE must be >= 0");

  double devices = 0, people = 0, nrmse_sum = 0;
  std::size_t nrmse_n = 0;
  for (std::size_t j = 0; j < device_series.size(); ++j) {
    const auto& d = device_series[j];
    if (std::abs(d.window.start - people_series[j].start) > kAlignTolerance) {
      throw InputError("misaligned series at window " + std::to_string(j) + ": start " +
                       format_real(d.window.start) + " vs " +
                       format_real(people_series[j].start));
    }
    devices += d.n_hat;
    people += people_series[j].m_bar;
    if (d.nrmse_estimate) {
      nrmse_sum += *d.nrmse_estimate;
      ++nrmse_n;
    }
  }
  if (!(people > 0)) throw InputError("reference people series sums to zero");
  if (!(devices > 0)) throw InsufficientData("no bursts observed in calibration series");

  CalibrationRatio r;
  r.alpha = devices / people;
  r.nrmse_people_ref = nrmse_people_ref;
  r.nrmse_device_cal = nrmse_sum / static_cast<double>(nrmse_n);
  r.source_window_span = device_series.back().window.end() - device_series.front().window.start;
  return r;
}

double propagate_nrmse(double reference, double calibration, double window) {
  return std::sqrt(reference * reference + calibration * calibration + window * window);
}

PeopleEstimate people_count(const WindowEstimate& estimate, const CalibrationRatio& ratio) {
  if (!(ratio.alpha > 0)) throw std::invalid_argument("device-to-person ratio must be positive");
  PeopleEstimate p;
  p.window = estimate.window;
  p.m_hat = estimate.n_hat / ratio.alpha;
  if (estimate.nrmse_estimate) {
    p.nrmse_estimate =
        propagate_nrmse(ratio.nrmse_people_ref, ratio.nrmse_device_cal, *estimate.nrmse_estimate);
  }
  return p;
}

std::string CalibrationRatio::serialize() const {
  std::ostringstream out;
  out << "# device-to-person ratio\n";
  out << "alpha = " << format_real(alpha) << '\n';
  out << "nrmse_people_ref = " << format_real(nrmse_people_ref) << '\n';
  out << "nrmse_device_cal = " << format_real(nrmse_device_cal) << '\n';
  out << "source_window_span = " << format_real(source_window_span) << '\n';
  return out.str();
}

CalibrationRatio CalibrationRatio::deserialize(std::string_view text) {
  const auto doc = KeyValueDoc::parse(text);
  CalibrationRatio r;
  r.alpha = doc.real("alpha");
  r.nrmse_people_ref = doc.real("nrmse_people_ref");
  r.nrmse_device_cal = doc.real("nrmse_device_cal");
  r.source_window_span = doc.real("source_window_span");
  if (!(r.alpha > 0)) throw InputError("alpha must be positive");
  if (!(r.nrmse_people_ref >= 0) || !(r.nrmse_device_cal >= 0)) {
    throw InputError("NRMSE terms must be non-negative");
  }
  return r;
}

}  // namespace ratecount
