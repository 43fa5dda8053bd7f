#include "ratecount/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ratecount/error.hpp"
#include "ratecount/interval_model.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double standard_normal(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double exponential_draw(Rng& rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

// Density proportional to x on [a, b], by inversion.
double linear_ramp(Rng& rng, double a, double b) {
  return std::sqrt(a * a + uniform01(rng) * (b * b - a * a));
}

// "name:k1=v1,k2=v2" -> name and parameters.
std::pair<std::string, std::map<std::string, double>> split_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  std::string name(spec.substr(0, colon));
  std::map<std::string, double> params;
  if (colon == std::string_view::npos) return {name, params};
  auto rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("malformed distribution parameter '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    params[key] = parse_real(item.substr(eq + 1), "distribution parameter " + key);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return {name, params};
}

double need(const std::map<std::string, double>& params, const std::string& key,
            std::string_view spec) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InputError("distribution '" + std::string(spec) + "' missing parameter " + key);
  }
  return it->second;
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Distribution Distribution::exponential(double mean) {
  if (!(mean > 0)) throw std::invalid_argument("exponential mean must be positive");
  return Distribution(Exponential{mean});
}

Distribution Distribution::lognormal(double mu, double sigma) {
  if (!std::isfinite(mu) || !(sigma >= 0)) throw std::invalid_argument("bad log-normal parameters");
  return Distribution(LogNormal{mu, sigma});
}

Distribution Distribution::lognormal_with_mean(double mean, double sigma) {
  if (!(mean > 0)) throw std::invalid_argument("log-normal mean must be positive");
  return lognormal(std::log(mean) - sigma * sigma / 2.0, sigma);
}

Distribution Distribution::constant(double value) {
  if (!(value > 0)) throw std::invalid_argument("constant value must be positive");
  return Distribution(Constant{value});
}

Distribution Distribution::uniform(double min, double max) {
  if (!(min >= 0) || !(max > min)) throw std::invalid_argument("uniform needs 0 <= min < max");
  return Distribution(Uniform{min, max});
}

Distribution Distribution::histogram(const IntervalModel& model, std::string source) {
  if (model.sample_count == 0) throw InputError("histogram distribution from an empty model");
  Histogram h{model.bin_width, {}, std::move(source)};
  h.counts.assign(model.histogram.begin(), model.histogram.end());
  return Distribution(std::move(h));
}

Distribution Distribution::parse(std::string_view spec, const std::string& base_dir) {
  if (spec.starts_with("hist:")) {
    std::filesystem::path path(std::string(spec.substr(5)));
    std::filesystem::path resolved = path;
    if (path.is_relative() && !base_dir.empty()) resolved = std::filesystem::path(base_dir) / path;
    return histogram(IntervalModel::deserialize(read_file(resolved.string())), path.string());
  }
  const auto [name, p] = split_spec(spec);
  try {
    if (name == "exp") return exponential(need(p, "mean", spec));
    if (name == "lognormal") {
      if (p.contains("mean")) return lognormal_with_mean(need(p, "mean", spec), need(p, "sigma", spec));
      return lognormal(need(p, "mu", spec), need(p, "sigma", spec));
    }
    if (name == "const") return constant(need(p, "value", spec));
    if (name == "uniform") return uniform(need(p, "min", spec), need(p, "max", spec));
  } catch (const std::invalid_argument& e) {
    throw InputError("distribution '" + std::string(spec) + "': " + e.what());
  }
  throw InputError("unknown distribution '" + std::string(spec) + "'");
}

std::string Distribution::to_string() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return "exp:mean=" + format_real(d.mean); },
          [](const LogNormal& d) {
            return "lognormal:mu=" + format_real(d.mu) + ",sigma=" + format_real(d.sigma);
          },
          [](const Constant& d) { return "const:value=" + format_real(d.value); },
          [](const Uniform& d) {
            return "uniform:min=" + format_real(d.min) + ",max=" + format_real(d.max);
          },
          [](const Histogram& d) { return "hist:" + d.source; },
      },
      kind_);
}

double Distribution::mean() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return d.mean; },
          [](const LogNormal& d) { return std::exp(d.mu + d.sigma * d.sigma / 2.0); },
          [](const Constant& d) { return d.value; },
          [](const Uniform& d) { return (d.min + d.max) / 2.0; },
          [](const Histogram& d) {
            double n = 0, s = 0;
            for (std::size_t i = 0; i < d.counts.size(); ++i) {
              n += d.counts[i];
              s += d.counts[i] * (static_cast<double>(i) + 0.5) * d.bin_width;
            }
            return s / n;
          },
      },
      kind_);
}

double Distribution::stddev() const {
  return std::visit(
      Overloaded{
          [](const Exponential& d) { return d.mean; },
          [](const LogNormal& d) {
            const double s2 = d.sigma * d.sigma;
            return std::sqrt(std::expm1(s2)) * std::exp(d.mu + s2 / 2.0);
          },
          [](const Constant&) { return 0.0; },
          [](const Uniform& d) { return (d.max - d.min) / std::sqrt(12.0); },
          [this](const Histogram& d) {
            const double mu = mean();
            double n = 0, s = 0;
            for (std::size_t i = 0; i < d.counts.size(); ++i) {
              const double mid = (static_cast<double>(i) + 0.5) * d.bin_width;
              n += d.counts[i];
              s += d.counts[i] * ((mid - mu) * (mid - mu) + d.bin_width * d.bin_width / 12.0);
            }
            return std::sqrt(s / n);
          },
      },
      kind_);
}

double Distribution::sample(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return exponential_draw(rng, d.mean); },
          [&](const LogNormal& d) { return std::exp(d.mu + d.sigma * standard_normal(rng)); },
          [](const Constant& d) { return d.value; },
          [&](const Uniform& d) { return d.min + (d.max - d.min) * uniform01(rng); },
          [&](const Histogram& d) {
            const double total = std::accumulate(d.counts.begin(), d.counts.end(), 0.0);
            double target = uniform01(rng) * total;
            std::size_t bin = 0;
            for (; bin + 1 < d.counts.size(); ++bin) {
              if (target < d.counts[bin]) break;
              target -= d.counts[bin];
            }
            return (static_cast<double>(bin) + uniform01(rng)) * d.bin_width;
          },
      },
      kind_);
}

double Distribution::sample_length_biased(Rng& rng) const {
  return std::visit(
      Overloaded{
          // x e^{-x/m} / m^2 is Gamma(2, m).
          [&](const Exponential& d) {
            return exponential_draw(rng, d.mean) + exponential_draw(rng, d.mean);
          },
          [&](const LogNormal& d) {
            return std::exp(d.mu + d.sigma * d.sigma + d.sigma * standard_normal(rng));
          },
          [](const Constant& d) { return d.value; },
          [&](const Uniform& d) { return linear_ramp(rng, d.min, d.max); },
          [&](const Histogram& d) {
            std::vector<double> weight(d.counts.size());
            for (std::size_t i = 0; i < d.counts.size(); ++i) {
              weight[i] = d.counts[i] * (static_cast<double>(i) + 0.5);
            }
            const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
            double target = uniform01(rng) * total;
            std::size_t bin = 0;
            for (; bin + 1 < weight.size(); ++bin) {
              if (target < weight[bin]) break;
              target -= weight[bin];
            }
            const double a = static_cast<double>(bin) * d.bin_width;
            return linear_ramp(rng, a, a + d.bin_width);
          },
      },
      kind_);
}

double Distribution::sample_residual(Rng& rng) const {
  // Memoryless: the residual is again exponential.
  if (const auto* e = std::get_if<Exponential>(&kind_)) return exponential_draw(rng, e->mean);
  const double spanning = sample_length_biased(rng);
  return spanning * uniform01(rng);
}

CountDistribution CountDistribution::constant(unsigned value) {
  return CountDistribution(Constant{value});
}

CountDistribution CountDistribution::poisson(double mean) {
  if (!(mean >= 0)) throw std::invalid_argument("poisson mean must be non-negative");
  return CountDistribution(Poisson{mean});
}

CountDistribution CountDistribution::parse(std::string_view spec) {
  if (!spec.empty() && spec.find(':') == std::string_view::npos) {
    const double v = parse_real(spec, "device count");
    if (v < 0 || v != std::floor(v)) throw InputError("device count must be a non-negative integer");
    return constant(static_cast<unsigned>(v));
  }
  const auto [name, p] = split_spec(spec);
  if (name == "const") {
    const double v = need(p, "k", spec);
    if (v < 0 || v != std::floor(v)) throw InputError("const:k must be a non-negative integer");
    return constant(static_cast<unsigned>(v));
  }
  if (name == "poisson") {
    const double m = need(p, "mean", spec);
    if (!(m >= 0)) throw InputError("poisson mean must be non-negative");
    return poisson(m);
  }
  throw InputError("unknown count distribution '" + std::string(spec) + "'");
}

std::string CountDistribution::to_string() const {
  return std::visit(Overloaded{
                        [](const Constant& d) { return "const:k=" + std::to_string(d.value); },
                        [](const Poisson& d) { return "poisson:mean=" + format_real(d.mean); },
                    },
                    kind_);
}

double CountDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const Constant& d) { return static_cast<double>(d.value); },
                        [](const Poisson& d) { return d.mean; },
                    },
                    kind_);
}

unsigned CountDistribution::sample(Rng& rng) const {
  return std::visit(Overloaded{
                        [](const Constant& d) { return d.value; },
                        [&](const Poisson& d) {
                          // Knuth's product method on chunks small enough that
                          // exp(-chunk) stays well above underflow.
                          unsigned k = 0;
                          double remaining = d.mean;
                          while (remaining > 0) {
                            const double chunk = std::min(remaining, 30.0);
                            remaining -= chunk;
                            const double limit = std::exp(-chunk);
                            double prod = uniform01(rng);
                            while (prod > limit) {
                              ++k;
                              prod *= uniform01(rng);
                            }
                          }
                          return k;
                        },
                    },
                    kind_);
}

}  // namespace ratecount
