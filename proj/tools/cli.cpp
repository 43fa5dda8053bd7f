#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ratecount/burst.hpp"
#include "ratecount/calibration.hpp"
#include "ratecount/error.hpp"
#include "ratecount/ingest.hpp"
#include "ratecount/interval_model.hpp"
#include "ratecount/metrics.hpp"
#include "ratecount/rate_counter.hpp"
#include "ratecount/series_io.hpp"
#include "ratecount/simulator.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount::cli {
namespace {

/// Counting parameters shared by the pipeline commands.
struct RunProfile {
  double window_size = kDefaultWindow;
  double step = kDefaultStep;
  double burst_gap = kDefaultBurstGap;
  double interval_cutoff = kDefaultIntervalCutoff;
  std::string model_path;
  std::string area_id = "default";

  void validate() const {
    if (!(window_size > 0)) throw InputError("--window must be positive");
    if (!(step > 0)) throw InputError("--step must be positive");
    if (!(burst_gap > 0)) throw InputError("--gap must be positive");
    if (!(interval_cutoff > 0)) throw InputError("--cutoff must be positive");
  }
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;

  std::string read(const std::string& path) const {
    if (path != "-") return read_file(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& path, std::string_view text) const {
    if (path.empty() || path == "-") {
      out << text;
    } else {
      write_file(path, text);
    }
  }
};

std::vector<PrfEvent> load_events(const Io& io, const std::string& path, const std::string& format,
                                  const std::string& ap_id) {
  const std::string raw = io.read(path);
  const auto* data = reinterpret_cast<const std::uint8_t*>(raw.data());
  std::span<const std::uint8_t> bytes(data, raw.size());
  bool capture = format == "capture";
  if (format == "auto") capture = looks_like_capture(bytes);
  if (capture) return parse_capture(bytes, ap_id);
  return parse_events(raw);
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Input format")
      ->check(CLI::IsMember({"auto", "capture", "events"}))
      ->capture_default_str();
}

std::vector<Window> windows_for(const RunProfile& profile, std::span<const Burst> bursts,
                                std::optional<double> begin, std::optional<double> end) {
  if (begin && end) return window_span(*begin, *end, profile.window_size, profile.step);
  if (bursts.empty()) return {};
  const double first = begin.value_or(bursts.front().probing_instant);
  const double last = end.value_or(bursts.back().probing_instant);
  return window_grid(first, last, profile.window_size, profile.step);
}

// Rows keyed by window start, tolerant of text round-off.
double lookup(const std::vector<std::pair<double, double>>& sorted, double start) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), start - 1e-6,
                             [](const auto& p, double t) { return p.first < t; });
  if (it == sorted.end() || std::abs(it->first - start) > 1e-6) {
    throw InputError("reference has no window starting at " + format_real(start));
  }
  return it->second;
}

std::size_t pick_column(const SeriesTable& table, const std::string& requested,
                        std::initializer_list<const char*> preferred, const char* role) {
  if (!requested.empty()) {
    const int c = table.column(requested);
    if (c < 0) throw InputError(std::string(role) + " has no column '" + requested + "'");
    return static_cast<std::size_t>(c);
  }
  for (const char* name : preferred) {
    const int c = table.column(name);
    if (c >= 0) return static_cast<std::size_t>(c);
  }
  const std::size_t width = !table.columns.empty() ? table.columns.size()
                            : table.rows.empty()    ? 0
                                                    : table.rows.front().size();
  if (width < 2) throw InputError(std::string(role) + " needs a start and a value column");
  return width - 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Io io{in, out, err};
  CLI::App app{"Learning-free Wi-Fi device and people counting from probe requests", "ratecount"};
  app.require_subcommand(1);

  RunProfile profile;
  std::string input = "-";
  std::string format = "auto";
  std::string output;
  std::string ap_id = "capture";

  // fit
  double bin_width = kDefaultBinWidth;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the probing-interval model of an area");
  fit_cmd->add_option("input", input, "Capture or event file ('-' for stdin)")->capture_default_str();
  add_format(fit_cmd, format);
  fit_cmd->add_option("--gap", profile.burst_gap, "Burst gap (s)")->capture_default_str();
  fit_cmd->add_option("--cutoff", profile.interval_cutoff, "Longest probing interval kept (s)")
      ->capture_default_str();
  fit_cmd->add_option("--bin-width", bin_width, "Histogram bin width (s)")->capture_default_str();
  fit_cmd->add_option("--area", profile.area_id, "Counting area id")->capture_default_str();
  fit_cmd->add_option("--model", profile.model_path, "Model output path (stdout if omitted)");
  fit_cmd->add_option("--ap", ap_id, "Capture-point id for capture input")->capture_default_str();

  // count
  std::string baseline;
  std::optional<double> begin, end;
  auto* count_cmd = app.add_subcommand("count", "Sliding-window device counts");
  count_cmd->add_option("input", input, "Capture or event file ('-' for stdin)")->capture_default_str();
  add_format(count_cmd, format);
  count_cmd->add_option("--model", profile.model_path, "Interval model from 'fit'");
  count_cmd->add_option("--window", profile.window_size, "Window size (s)")->capture_default_str();
  count_cmd->add_option("--step", profile.step, "Window step (s)")->capture_default_str();
  count_cmd->add_option("--gap", profile.burst_gap, "Burst gap (s)")->capture_default_str();
  count_cmd->add_option("--begin", begin, "First window start (s)");
  count_cmd->add_option("--end", end, "Windows must end by this time (s)");
  count_cmd->add_option("--baseline", baseline, "Alternative counter")->check(CLI::IsMember({"mac"}));
  count_cmd->add_option("--ap", ap_id, "Capture-point id for capture input")->capture_default_str();
  count_cmd->add_option("-o,--output", output, "Output path (stdout if omitted)");

  // simulate
  std::string config_path, events_path, truth_path, truth_series_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic trace with ground truth");
  sim_cmd->add_option("--config", config_path, "Simulation config (key = value)");
  sim_cmd->add_option("--set", overrides, "Override a config key: key=value");
  sim_cmd->add_option("--seed", seed, "Random seed");
  sim_cmd->add_option("--events", events_path, "Event output path (stdout if omitted)");
  sim_cmd->add_option("--truth", truth_path, "Ground-truth sidecar path");
  sim_cmd->add_option("--truth-series", truth_series_path, "Window-averaged ground truth path");
  sim_cmd->add_option("--window", profile.window_size, "Window size for --truth-series (s)")
      ->capture_default_str();
  sim_cmd->add_option("--step", profile.step, "Window step for --truth-series (s)")->capture_default_str();

  // calibrate
  std::string device_series, people_series;
  double ref_nrmse = 0.0;
  auto* cal_cmd = app.add_subcommand("calibrate", "Estimate the device-to-person ratio");
  cal_cmd->add_option("device_series", device_series, "Output of 'count'")->required();
  cal_cmd->add_option("people_series", people_series, "Reference 'start m_bar' series")->required();
  cal_cmd->add_option("--ref-nrmse", ref_nrmse, "NRMSE of the reference people counter")
      ->capture_default_str();
  cal_cmd->add_option("-o,--output", output, "Ratio output path (stdout if omitted)");

  // people
  std::string ratio_path;
  auto* people_cmd = app.add_subcommand("people", "Convert device counts to people counts");
  people_cmd->add_option("device_series", device_series, "Output of 'count'")->required();
  people_cmd->add_option("--ratio", ratio_path, "Ratio file from 'calibrate'")->required();
  people_cmd->add_option("-o,--output", output, "Output path (stdout if omitted)");

  // eval
  std::string estimates_path, reference_path, est_col, ref_col;
  auto* eval_cmd = app.add_subcommand("eval", "RMSE, MAPE and NRMSE against a reference series");
  eval_cmd->add_option("estimates", estimates_path, "Estimate series")->required();
  eval_cmd->add_option("reference", reference_path, "Reference series")->required();
  eval_cmd->add_option("--est-col", est_col, "Estimate column name");
  eval_cmd->add_option("--ref-col", ref_col, "Reference column name");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    profile.validate();

    if (fit_cmd->parsed()) {
      const auto events = load_events(io, input, format, ap_id);
      const auto bursts = aggregate(events, profile.burst_gap);
      const auto samples = extract_intervals(bursts, profile.interval_cutoff);
      const auto model = fit(samples, {profile.area_id, bin_width, profile.interval_cutoff});
      if (profile.model_path.empty()) {
        out << model.serialize();
      } else {
        write_file(profile.model_path, model.serialize());
        out << "tau_mean " << format_real(model.tau_mean) << '\n'
            << "tau_std " << format_real(model.tau_std) << '\n'
            << "n " << model.sample_count << '\n';
      }
      return kOk;
    }

    if (count_cmd->parsed()) {
      std::optional<IntervalModel> model;
      if (baseline.empty()) {
        if (profile.model_path.empty()) throw InputError("count requires --model");
        model = IntervalModel::deserialize(read_file(profile.model_path));
      }
      const auto events = load_events(io, input, format, ap_id);
      const auto bursts = aggregate(events, profile.burst_gap);
      const auto windows = windows_for(profile, bursts, begin, end);
      if (model) {
        io.write(output, format_window_estimates(count_windows(bursts, windows, *model)));
      } else {
        std::string text = "# start w mac_count\n";
        for (const auto& w : windows) {
          text += format_real(w.start) + ' ' + format_real(w.size) + ' ' +
                  format_real(mac_count_baseline(events, w)) + '\n';
        }
        io.write(output, text);
      }
      return kOk;
    }

    if (sim_cmd->parsed()) {
      std::string text;
      std::string base_dir;
      if (!config_path.empty()) {
        text = read_file(config_path);
        base_dir = std::filesystem::path(config_path).parent_path().string();
      }
      for (const auto& kv : overrides) {
        if (kv.find('=') == std::string::npos) throw InputError("--set expects key=value");
        text += '\n' + kv;
      }
      auto config = SimConfig::parse(text, base_dir);
      if (seed) config.seed = *seed;
      const auto result = simulate(config);
      io.write(events_path, format_events(result.events));
      if (!truth_path.empty()) write_file(truth_path, result.trace.serialize());
      if (!truth_series_path.empty()) {
        const auto windows = window_span(0.0, config.duration, profile.window_size, profile.step);
        const auto truth = ground_truth_windows(result.trace, windows);
        std::string series = "# start w n_bar m_bar\n";
        for (std::size_t i = 0; i < windows.size(); ++i) {
          series += format_real(windows[i].start) + ' ' + format_real(windows[i].size) + ' ' +
                    format_real(truth[i].n_bar) + ' ' + format_real(truth[i].m_bar) + '\n';
        }
        write_file(truth_series_path, series);
      }
      return kOk;
    }

    if (cal_cmd->parsed()) {
      const auto devices = parse_window_estimates(io.read(device_series));
      const auto people = parse_people_references(io.read(people_series));
      io.write(output, estimate_ratio(devices, people, ref_nrmse).serialize());
      return kOk;
    }

    if (people_cmd->parsed()) {
      const auto devices = parse_window_estimates(io.read(device_series));
      const auto ratio = CalibrationRatio::deserialize(read_file(ratio_path));
      std::vector<PeopleEstimate> people;
      people.reserve(devices.size());
      for (const auto& d : devices) people.push_back(people_count(d, ratio));
      io.write(output, format_people_estimates(people));
      return kOk;
    }

    if (eval_cmd->parsed()) {
      const auto est = SeriesTable::parse(io.read(estimates_path));
      const auto ref = SeriesTable::parse(io.read(reference_path));
      const auto est_c = pick_column(est, est_col, {"n_hat", "m_hat", "mac_count"}, "estimates");
      const bool people_est = est.column("m_hat") == static_cast<int>(est_c);
      const auto ref_c = people_est ? pick_column(ref, ref_col, {"m_bar"}, "reference")
                                    : pick_column(ref, ref_col, {"n_bar", "m_bar"}, "reference");

      std::vector<std::pair<double, double>> ref_rows;
      for (const auto& r : ref.rows) ref_rows.emplace_back(r.at(0), r.at(ref_c));
      std::sort(ref_rows.begin(), ref_rows.end());

      std::vector<double> y_hat, y_bar;
      for (const auto& r : est.rows) {
        const double e = r.at(est_c);
        const double y = lookup(ref_rows, r.at(0));
        if (std::isnan(e) || std::isnan(y)) continue;
        y_hat.push_back(e);
        y_bar.push_back(y);
      }
      if (y_hat.empty()) throw InsufficientData("no aligned windows to evaluate");

      auto guarded = [](auto&& f) -> std::string {
        try {
          return format_real(f());
        } catch (const InputError&) {
          return "-";
        }
      };
      out << "windows " << y_hat.size() << '\n'
          << "rmse " << format_real(rmse(y_hat, y_bar)) << '\n'
          << "mape " << guarded([&] { return mape(y_hat, y_bar); }) << '\n'
          << "nrmse " << guarded([&] { return nrmse(y_hat, y_bar); }) << '\n';
      return kOk;
    }
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << '\n';
    return kInsufficientData;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ratecount::cli
