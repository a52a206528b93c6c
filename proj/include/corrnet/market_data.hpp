#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrnet/csv.hpp"
#include "corrnet/date.hpp"
#include "corrnet/error.hpp"

namespace corrnet {

/// Daily closing prices, one row per index and one column per date.
/// A NaN cell marks a missing observation (only before alignment).
struct PricePanel {
  std::vector<std::string> index_ids;
  std::vector<Date> dates;
  Eigen::MatrixXd prices;

  std::size_t n_indices() const { return index_ids.size(); }
  std::size_t n_dates() const { return dates.size(); }

  bool has_missing() const { return prices.hasNaN(); }

  friend bool operator==(const PricePanel& a, const PricePanel& b) {
    if (a.index_ids != b.index_ids || a.dates != b.dates) return false;
    if (a.prices.rows() != b.prices.rows() || a.prices.cols() != b.prices.cols()) return false;
    for (Eigen::Index i = 0; i < a.prices.size(); ++i) {
      const double x = a.prices.data()[i];
      const double y = b.prices.data()[i];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
    return true;
  }
};

inline bool is_missing(double price) { return std::isnan(price); }

struct Period {
  std::string name;
  Date start;
  Date end;

  friend bool operator==(const Period&, const Period&) = default;
};

/// index id -> zone label.
using ZonePartition = std::map<std::string, std::string>;

/// The three windows used throughout: before, during and after the 2008 crisis.
inline std::vector<Period> default_periods() {
  return {
      {"before", Date(2006, 6, 2), Date(2007, 11, 30)},
      {"during", Date(2007, 12, 3), Date(2009, 6, 30)},
      {"after", Date(2009, 7, 1), Date(2010, 11, 30)},
  };
}

inline void validate_periods(const std::vector<Period>& periods) {
  std::set<std::string> names;
  for (const auto& p : periods) {
    if (p.end < p.start) fail(ErrorCode::InvalidArgument, "period '" + p.name + "' ends before it starts");
    if (!names.insert(p.name).second) fail(ErrorCode::InvalidArgument, "duplicate period name '" + p.name + "'");
  }
}

/// Parses `date,<id1>,...,<idN>` CSV. Rows are returned in date order; empty
/// cells become NaN.
inline PricePanel load_prices(std::istream& in) {
  auto lines = csv::read_lines(in);
  if (lines.empty()) fail(ErrorCode::MalformedCsv, "empty input");

  auto header = csv::split(lines.front().second);
  if (header.front() != "date") fail(ErrorCode::MalformedCsv, "first header cell must be 'date'");
  if (header.size() < 2) fail(ErrorCode::MalformedCsv, "header names no index columns");

  PricePanel panel;
  std::set<std::string> seen_ids;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) fail(ErrorCode::MalformedCsv, "empty index id in header column " + std::to_string(c + 1));
    if (!seen_ids.insert(header[c]).second) fail(ErrorCode::DuplicateIndexId, "index id '" + header[c] + "'");
    panel.index_ids.push_back(header[c]);
  }

  const std::size_t n = panel.index_ids.size();
  std::vector<std::pair<Date, std::vector<double>>> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [line_no, text] = lines[r];
    const std::string where = "line " + std::to_string(line_no);
    auto cells = csv::split(text);
    if (cells.size() != n + 1) {
      fail(ErrorCode::MalformedCsv, where + ": expected " + std::to_string(n + 1) + " cells, got " +
                                        std::to_string(cells.size()));
    }
    auto date = Date::parse(cells[0]);
    if (!date) fail(ErrorCode::MalformedCsv, where + ": bad date '" + cells[0] + "'");
    std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < n; ++c) {
      const auto& cell = cells[c + 1];
      if (cell.empty()) continue;
      auto value = csv::parse_double(cell);
      if (!value || !std::isfinite(*value)) fail(ErrorCode::MalformedCsv, where + ": non-numeric cell '" + cell + "'");
      if (*value <= 0.0) fail(ErrorCode::NonPositivePrice, where + ", index " + panel.index_ids[c] + ": " + cell);
      values[c] = *value;
    }
    rows.emplace_back(*date, std::move(values));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].first == rows[r - 1].first) fail(ErrorCode::DuplicateDate, rows[r].first.iso());
  }

  panel.prices.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    panel.dates.push_back(rows[t].first);
    for (std::size_t i = 0; i < n; ++i) panel.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[t].second[i];
  }
  return panel;
}

inline PricePanel load_prices(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_prices(in);
}

/// Forward-fills runs of at most `max_fill` consecutive missing cells from the
/// index's last observed price, then drops every date on which any index is
/// still missing.
inline PricePanel align_panel(const PricePanel& panel, std::size_t max_fill = 5) {
  Eigen::MatrixXd filled = panel.prices;
  const Eigen::Index n_dates = filled.cols();

  for (Eigen::Index i = 0; i < filled.rows(); ++i) {
    Eigen::Index t = 0;
    while (t < n_dates) {
      if (!is_missing(filled(i, t))) {
        ++t;
        continue;
      }
      Eigen::Index run_end = t;
      while (run_end < n_dates && is_missing(filled(i, run_end))) ++run_end;
      const auto run = static_cast<std::size_t>(run_end - t);
      if (run <= max_fill) {
        if (t == 0) {
          fail(ErrorCode::LeadingGap, "index " + panel.index_ids[static_cast<std::size_t>(i)] +
                                          " has no price before its first " + std::to_string(run) +
                                          " missing date(s)");
        }
        for (Eigen::Index k = t; k < run_end; ++k) filled(i, k) = filled(i, t - 1);
      }
      t = run_end;
    }
  }

  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < n_dates; ++t) {
    if (!filled.col(t).hasNaN()) keep.push_back(t);
  }
  if (keep.empty()) fail(ErrorCode::EmptyPanelAfterAlignment, "no date has a price for every index");

  PricePanel out;
  out.index_ids = panel.index_ids;
  out.prices.resize(filled.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.dates.push_back(panel.dates[static_cast<std::size_t>(keep[k])]);
    out.prices.col(static_cast<Eigen::Index>(k)) = filled.col(keep[k]);
  }
  return out;
}

inline PricePanel slice_period(const PricePanel& panel, const Period& period) {
  auto first = std::lower_bound(panel.dates.begin(), panel.dates.end(), period.start);
  auto last = std::upper_bound(panel.dates.begin(), panel.dates.end(), period.end);
  if (first >= last) {
    fail(ErrorCode::EmptySlice, "no dates in period '" + period.name + "' [" + period.start.iso() + ", " +
                                    period.end.iso() + "]");
  }
  const auto offset = static_cast<Eigen::Index>(first - panel.dates.begin());
  const auto count = static_cast<Eigen::Index>(last - first);

  PricePanel out;
  out.index_ids = panel.index_ids;
  out.dates.assign(first, last);
  out.prices = panel.prices.middleCols(offset, count);
  return out;
}

/// Parses `index,zone` CSV.
inline ZonePartition load_zones(std::istream& in) {
  auto lines = csv::read_lines(in);
  if (lines.empty()) fail(ErrorCode::MalformedCsv, "empty zone file");
  auto header = csv::split(lines.front().second);
  if (header.size() != 2 || header[0] != "index" || header[1] != "zone") {
    fail(ErrorCode::MalformedCsv, "zone header must be 'index,zone'");
  }
  ZonePartition zones;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = csv::split(lines[r].second);
    const std::string where = "line " + std::to_string(lines[r].first);
    if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) fail(ErrorCode::MalformedCsv, where);
    if (!zones.emplace(cells[0], cells[1]).second) fail(ErrorCode::DuplicateIndexId, where + ": " + cells[0]);
  }
  return zones;
}

inline ZonePartition load_zones(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_zones(in);
}

inline void require_zones(const ZonePartition& zones, const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    if (!zones.contains(id)) fail(ErrorCode::MissingZone, "no zone for index " + id);
  }
}

}  // namespace corrnet
