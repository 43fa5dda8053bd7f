#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratecount/calibration.hpp"
#include "ratecount/rate_counter.hpp"

namespace ratecount {

// Line-oriented window series. Every file starts with a `# ` header naming the
// columns; undefined values are written as `-`.

/// `start w B R n_hat var_lower_bound nrmse_estimate`
std::string format_window_estimates(std::span<const WindowEstimate> estimates);
std::vector<WindowEstimate> parse_window_estimates(std::string_view text);

/// `start w m_hat nrmse_estimate`
std::string format_people_estimates(std::span<const PeopleEstimate> estimates);

/// `start m_bar`; a header line is optional.
std::vector<PeopleReference> parse_people_references(std::string_view text);

/// Generic numeric table: header names plus rows, with NaN for `-`.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`, or -1.
  int column(std::string_view name) const;
  std::vector<double> values(std::size_t column) const;

  static SeriesTable parse(std::string_view text);
};

}  // namespace ratecount
