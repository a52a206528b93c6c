#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corrnet/csv.hpp"
#include "corrnet/error.hpp"
#include "corrnet/mst.hpp"

namespace corrnet {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

struct CityLocation {
  std::string city;
  LatLon position;
};

using CoordinateTable = std::map<std::string, CityLocation>;

struct ScalingPoint {
  std::string index_id;
  double geo_km = 0.0;
  std::size_t hops = 0;
  bool in_fit = true;  // false when the node shares the hub's location

  friend bool operator==(const ScalingPoint&, const ScalingPoint&) = default;
};

struct FitResult {
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  bool flat = false;  // zero variance in ln d; r_squared reported as 0

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_at_5pct = false;

  friend bool operator==(const KsResult&, const KsResult&) = default;
};

inline void check_coordinate(const LatLon& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0)) {
    fail(ErrorCode::OutOfRangeCoordinate, "(" + std::to_string(p.lat) + ", " + std::to_string(p.lon) + ")");
  }
}

/// Great-circle distance on a sphere of radius 6371 km.
inline double haversine_km(const LatLon& a, const LatLon& b) {
  check_coordinate(a);
  check_coordinate(b);
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(s, 0.0, 1.0)));
}

/// Parses `index,city,lat,lon` CSV.
inline CoordinateTable load_coordinates(std::istream& in) {
  auto lines = csv::read_lines(in);
  if (lines.empty()) fail(ErrorCode::MalformedCsv, "empty coordinates file");
  auto header = csv::split(lines.front().second);
  if (header != std::vector<std::string>{"index", "city", "lat", "lon"}) {
    fail(ErrorCode::MalformedCsv, "coordinates header must be 'index,city,lat,lon'");
  }
  CoordinateTable table;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = "line " + std::to_string(lines[r].first);
    auto cells = csv::split(lines[r].second);
    if (cells.size() != 4 || cells[0].empty()) fail(ErrorCode::MalformedCsv, where);
    auto lat = csv::parse_double(cells[2]);
    auto lon = csv::parse_double(cells[3]);
    if (!lat || !lon) fail(ErrorCode::MalformedCsv, where + ": bad coordinate");
    LatLon p{*lat, *lon};
    check_coordinate(p);
    if (!table.emplace(cells[0], CityLocation{cells[1], p}).second) fail(ErrorCode::DuplicateIndexId, where + ": " + cells[0]);
  }
  return table;
}

inline CoordinateTable load_coordinates(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_coordinates(in);
}

/// One (geographic km, tree hops) point per non-hub node, ordered by id.
inline std::vector<ScalingPoint> scaling_points(const HubReport& hub_report, const CoordinateTable& coords) {
  auto locate = [&](const std::string& id) -> const CityLocation& {
    auto it = coords.find(id);
    if (it == coords.end()) fail(ErrorCode::MissingCoordinate, "no coordinates for index " + id);
    return it->second;
  };
  const auto& hub = locate(hub_report.hub);
  std::vector<ScalingPoint> points;
  for (const auto& [id, hops] : hub_report.hops) {
    if (id == hub_report.hub) continue;
    const double km = haversine_km(hub.position, locate(id).position);
    points.push_back({id, km, hops, km > 0.0});
  }
  return points;
}

/// OLS of ln d on ln L: d ~ L^alpha.
inline FitResult power_law_fit(const std::vector<std::pair<double, double>>& points) {
  const auto n = points.size();
  if (n < 3) fail(ErrorCode::TooFewPoints, std::to_string(n) + " point(s), need at least 3");
  std::vector<double> lx, ly;
  lx.reserve(n);
  ly.reserve(n);
  for (const auto& [l, d] : points) {
    if (!(l > 0.0) || !(d > 0.0)) fail(ErrorCode::NonPositiveValue, "power-law fit needs L > 0 and d > 0");
    lx.push_back(std::log(l));
    ly.push_back(std::log(d));
  }
  const double nd = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= nd;
  my /= nd;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::DegenerateFit, "all L values are equal");

  FitResult fit;
  fit.n_points = n;
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.alpha * lx[i]);
    sse += r * r;
  }
  fit.alpha_stderr = std::sqrt(sse / (nd - 2.0) / sxx);
  if (syy > 0.0) {
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  } else {
    fit.flat = true;
    fit.r_squared = 0.0;
  }
  return fit;
}

inline FitResult power_law_fit(const std::vector<ScalingPoint>& points) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : points) {
    if (p.in_fit) xy.emplace_back(p.geo_km, static_cast<double>(p.hops));
  }
  return power_law_fit(xy);
}

/// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
/// truncated at k = 100. Below lambda = 0.05 the truncated series has not
/// converged and the exact value is 1 to double precision.
inline double kolmogorov_tail(double lambda) {
  if (lambda < 0.05) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySample, "both samples need at least one value");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult out;
  out.statistic = d;
  out.p_value = kolmogorov_tail(std::sqrt(na * nb / (na + nb)) * d);
  out.reject_at_5pct = out.p_value < 0.05;
  return out;
}

}  // namespace corrnet
