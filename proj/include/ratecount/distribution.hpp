#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ratecount {

struct IntervalModel;

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw, so the
/// stream is identical across standard libraries.
double uniform01(Rng& rng);

/// Positive real distribution for dwell times and probing intervals.
class Distribution {
 public:
  struct Exponential {
    double mean;
  };
  struct LogNormal {
    double mu, sigma;
  };
  struct Constant {
    double value;
  };
  struct Uniform {
    double min, max;
  };
  struct Histogram {
    double bin_width;
    std::vector<double> counts;
    std::string source;
  };
  using Kind = std::variant<Exponential, LogNormal, Constant, Uniform, Histogram>;

  static Distribution exponential(double mean);
  static Distribution lognormal(double mu, double sigma);
  /// Log-normal with the given arithmetic mean.
  static Distribution lognormal_with_mean(double mean, double sigma);
  static Distribution constant(double value);
  static Distribution uniform(double min, double max);
  static Distribution histogram(const IntervalModel& model, std::string source = "");

  /// Parses `exp:mean=60`, `lognormal:mu=4,sigma=0.5`, `const:value=30`,
  /// `uniform:min=30,max=90` or `hist:<model path>`. Relative histogram paths
  /// are resolved against `base_dir`.
  static Distribution parse(std::string_view spec, const std::string& base_dir = "");
  std::string to_string() const;

  double mean() const;
  double stddev() const;

  double sample(Rng& rng) const;
  /// Draw from the length-biased density x f(x) / mean.
  double sample_length_biased(Rng& rng) const;
  /// Forward recurrence time of a renewal process observed at a random
  /// instant: density (1 - F(x)) / mean.
  double sample_residual(Rng& rng) const;

  const Kind& kind() const { return kind_; }

 private:
  explicit Distribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Distribution over non-negative integers (devices carried per person).
class CountDistribution {
 public:
  struct Constant {
    unsigned value;
  };
  struct Poisson {
    double mean;
  };
  using Kind = std::variant<Constant, Poisson>;

  static CountDistribution constant(unsigned value);
  static CountDistribution poisson(double mean);
  /// Parses `const:k=1`, a bare integer, or `poisson:mean=1.14`.
  static CountDistribution parse(std::string_view spec);
  std::string to_string() const;

  double mean() const;
  unsigned sample(Rng& rng) const;

 private:
  explicit CountDistribution(Kind kind) : kind_(kind) {}
  Kind kind_;
};

}  // namespace ratecount
