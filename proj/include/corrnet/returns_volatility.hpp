#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrnet/date.hpp"
#include "corrnet/error.hpp"
#include "corrnet/market_data.hpp"

namespace corrnet {

/// Log-returns, one row per index. `dates[t]` is the date the return ends on.
/// `sigma` always holds the raw-return sample standard deviations, also after
/// normalization.
struct ReturnPanel {
  std::vector<std::string> index_ids;
  std::vector<Date> dates;
  Eigen::MatrixXd returns;
  Eigen::VectorXd sigma;
  bool normalized = false;

  std::size_t n_indices() const { return index_ids.size(); }
  std::size_t n_obs() const { return dates.size(); }
};

struct VolatilitySeries {
  std::string index_id;
  std::vector<Date> dates;
  std::vector<double> values;
};

namespace detail {

inline double sample_stddev(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const auto n = row.size();
  const double mean = row.mean();
  double ss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) ss += (row(t) - mean) * (row(t) - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace detail

inline ReturnPanel log_returns(const PricePanel& panel) {
  if (panel.n_dates() < 3) fail(ErrorCode::TooFewDates, std::to_string(panel.n_dates()) + " date(s), need at least 3");
  if (panel.has_missing()) fail(ErrorCode::InvalidArgument, "price panel has missing cells; align it first");

  ReturnPanel rp;
  rp.index_ids = panel.index_ids;
  rp.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  // Scalar std::log so equal prices always give equal logs.
  const Eigen::MatrixXd logs = panel.prices.unaryExpr([](double p) { return std::log(p); });
  const Eigen::Index n_obs = logs.cols() - 1;
  rp.returns = logs.rightCols(n_obs) - logs.leftCols(n_obs);
  rp.sigma.resize(rp.returns.rows());
  for (Eigen::Index i = 0; i < rp.returns.rows(); ++i) {
    const double sd = detail::sample_stddev(rp.returns.row(i));
    const double scale = rp.returns.row(i).cwiseAbs().mean();
    // Constant-return rows leave only rounding noise in the deviation.
    if (!(sd > 1e-12 * scale)) {
      fail(ErrorCode::ZeroVariance, "index " + rp.index_ids[static_cast<std::size_t>(i)] + " has constant returns");
    }
    rp.sigma(i) = sd;
  }
  return rp;
}

inline ReturnPanel normalize_returns(const ReturnPanel& rp) {
  if (rp.normalized) fail(ErrorCode::AlreadyNormalized, "returns are already divided by sigma");
  ReturnPanel out = rp;
  for (Eigen::Index i = 0; i < out.returns.rows(); ++i) {
    if (!(rp.sigma(i) > 0.0)) fail(ErrorCode::ZeroVariance, "index " + rp.index_ids[static_cast<std::size_t>(i)]);
    out.returns.row(i) /= rp.sigma(i);
  }
  out.normalized = true;
  return out;
}

inline std::vector<VolatilitySeries> volatility(const ReturnPanel& rp) {
  if (rp.normalized) fail(ErrorCode::NormalizedInput, "volatility is defined on raw log-returns");
  std::vector<VolatilitySeries> out;
  out.reserve(rp.n_indices());
  for (std::size_t i = 0; i < rp.n_indices(); ++i) {
    VolatilitySeries s{rp.index_ids[i], rp.dates, {}};
    const auto row = rp.returns.row(static_cast<Eigen::Index>(i));
    s.values.reserve(static_cast<std::size_t>(row.size()));
    for (Eigen::Index t = 0; t < row.size(); ++t) s.values.push_back(std::abs(row(t)));
    out.push_back(std::move(s));
  }
  return out;
}

/// Mean over every value of every series.
inline double mean_volatility(const std::vector<VolatilitySeries>& all_series) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : all_series) {
    for (double v : s.values) sum += v;
    count += s.values.size();
  }
  if (count == 0) fail(ErrorCode::EmptyInput, "no volatility values");
  return sum / static_cast<double>(count);
}

/// Local-linear LOWESS without robustness iterations. Each point is fitted
/// over its `span` nearest neighbours in x with tricube weights
/// (1 - u^3)^3, u = distance / largest distance in the window. When `span`
/// exceeds the series length every point comes from one global OLS line.
/// `x` must be non-decreasing.
inline std::vector<double> lowess(std::span<const double> x, std::span<const double> y, std::size_t span = 5) {
  const std::size_t n = x.size();
  if (y.size() != n) fail(ErrorCode::InvalidArgument, "x and y differ in length");
  if (n < 2) fail(ErrorCode::SeriesTooShort, std::to_string(n) + " point(s)");
  if (span < 2) fail(ErrorCode::InvalidArgument, "span must be at least 2");

  // Weighted least-squares line over [lo, hi], evaluated at x0.
  auto fit_at = [&](std::size_t lo, std::size_t hi, double x0, auto&& weight) {
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double w = weight(j);
      sw += w;
      swx += w * x[j];
      swy += w * y[j];
    }
    const double xm = swx / sw;
    const double ym = swy / sw;
    double sxx = 0.0, sxy = 0.0, range = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double w = weight(j);
      sxx += w * (x[j] - xm) * (x[j] - xm);
      sxy += w * (x[j] - xm) * (y[j] - ym);
      range = std::max(range, std::abs(x[j] - xm));
    }
    if (sxx <= 1e-12 * sw * range * range || sxx == 0.0) return ym;
    return ym + sxy / sxx * (x0 - xm);
  };

  std::vector<double> out(n);
  if (span > n) {
    for (std::size_t t = 0; t < n; ++t) out[t] = fit_at(0, n - 1, x[t], [](std::size_t) { return 1.0; });
    return out;
  }

  std::size_t lo = 0;
  std::size_t hi = span - 1;
  for (std::size_t t = 0; t < n; ++t) {
    while (hi + 1 < n && x[t] - x[lo] > x[hi + 1] - x[t]) {
      ++lo;
      ++hi;
    }
    const double h = std::max(x[t] - x[lo], x[hi] - x[t]);
    auto tricube = [&](std::size_t j) {
      if (h <= 0.0) return 1.0;
      const double u = std::abs(x[j] - x[t]) / h;
      if (u >= 1.0) return 0.0;
      const double c = 1.0 - u * u * u;
      return c * c * c;
    };
    out[t] = fit_at(lo, hi, x[t], tricube);
  }
  return out;
}

/// LOWESS over the series' date ordinals.
inline VolatilitySeries lowess_smooth(const VolatilitySeries& series, std::size_t span = 5) {
  std::vector<double> x;
  x.reserve(series.dates.size());
  for (const auto& d : series.dates) x.push_back(static_cast<double>(d.ordinal()));
  VolatilitySeries out{series.index_id, series.dates, {}};
  out.values = lowess(x, series.values, span);
  return out;
}

}  // namespace corrnet
