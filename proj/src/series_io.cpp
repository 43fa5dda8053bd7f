#include "ratecount/series_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ratecount/error.hpp"
#include "ratecount/text_util.hpp"

namespace ratecount {
namespace {

constexpr std::string_view kEstimateHeader = "# start w B R n_hat var_lower_bound nrmse_estimate";

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("-");
}

}  // namespace

std::string format_window_estimates(std::span<const WindowEstimate> estimates) {
  std::string out(kEstimateHeader);
  out += '\n';
  for (const auto& e : estimates) {
    out += format_real(e.window.start) + ' ' + format_real(e.window.size) + ' ' +
           std::to_string(e.burst_count) + ' ' + format_real(e.rate) + ' ' + format_real(e.n_hat) +
           ' ' + format_real(e.var_lower_bound) + ' ' + format_optional(e.nrmse_estimate) + '\n';
  }
  return out;
}

std::string format_people_estimates(std::span<const PeopleEstimate> estimates) {
  std::string out = "# start w m_hat nrmse_estimate\n";
  for (const auto& p : estimates) {
    out += format_real(p.window.start) + ' ' + format_real(p.window.size) + ' ' +
           format_real(p.m_hat) + ' ' + format_optional(p.nrmse_estimate) + '\n';
  }
  return out;
}

SeriesTable SeriesTable::parse(std::string_view text) {
  SeriesTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (table.columns.empty() && table.rows.empty()) table.columns = split_ws(line.substr(first + 1));
      continue;
    }
    const auto fields = split_ws(line);
    std::vector<double> row;
    for (const auto& f : fields) {
      if (f == "-") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        row.push_back(parse_real(f, "value"));
      } catch (const InputError& e) {
        throw LineParseError(line_no, e.what());
      }
    }
    if (!table.rows.empty() && row.size() != table.rows.front().size()) {
      throw LineParseError(line_no, "inconsistent column count");
    }
    if (!table.columns.empty() && row.size() != table.columns.size()) {
      throw LineParseError(line_no, "row does not match header");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

int SeriesTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> SeriesTable::values(std::size_t column) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (column >= r.size()) throw InputError("column index out of range");
    out.push_back(r[column]);
  }
  return out;
}

std::vector<WindowEstimate> parse_window_estimates(std::string_view text) {
  const auto table = SeriesTable::parse(text);
  if (!table.rows.empty() && table.rows.front().size() != 7) {
    throw InputError("window estimate series needs 7 columns");
  }
  std::vector<WindowEstimate> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    WindowEstimate e;
    e.window = {r[0], r[1]};
    if (!(r[2] >= 0) || r[2] != std::floor(r[2])) throw InputError("burst count must be a non-negative integer");
    e.burst_count = static_cast<std::size_t>(r[2]);
    e.rate = r[3];
    e.n_hat = r[4];
    e.var_lower_bound = r[5];
    if (!std::isnan(r[6])) e.nrmse_estimate = r[6];
    out.push_back(e);
  }
  return out;
}

std::vector<PeopleReference> parse_people_references(std::string_view text) {
  const auto table = SeriesTable::parse(text);
  std::vector<PeopleReference> out;
  int col = table.column("m_bar");
  if (col < 0) col = 1;
  for (const auto& r : table.rows) {
    if (r.size() < 2) throw InputError("people series needs 'start m_bar' columns");
    const double m = r[static_cast<std::size_t>(col)];
    if (!std::isfinite(m) || m < 0) throw InputError("people counts must be finite and non-negative");
    out.push_back({r[0], m});
  }
  return out;
}

}  // namespace ratecount
