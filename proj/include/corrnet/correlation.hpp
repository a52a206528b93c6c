#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrnet/error.hpp"
#include "corrnet/market_data.hpp"
#include "corrnet/returns_volatility.hpp"

namespace corrnet {

struct CorrMatrix {
  std::vector<std::string> index_ids;
  Eigen::MatrixXd values;
  std::optional<Period> window;

  std::size_t size() const { return index_ids.size(); }
};

/// Central moments of the strictly-upper-triangle coefficients. Skewness and
/// kurtosis (non-excess) are absent when the coefficients have no spread.
struct CorrMoments {
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
  std::size_t n_pairs = 0;
};

struct DistMatrix {
  std::vector<std::string> index_ids;
  Eigen::MatrixXd values;

  std::size_t size() const { return index_ids.size(); }
};

/// Pearson coefficients between the rows of `rows`. Scale-free, so raw and
/// sigma-normalized returns give the same matrix.
inline Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index t_obs = rows.cols();
  Eigen::MatrixXd centered = rows;
  Eigen::VectorXd norms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mean = 0.0;
    for (Eigen::Index t = 0; t < t_obs; ++t) mean += rows(i, t);
    mean /= static_cast<double>(t_obs);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < t_obs; ++t) {
      centered(i, t) = rows(i, t) - mean;
      ss += centered(i, t) * centered(i, t);
    }
    if (!(ss > 0.0)) fail(ErrorCode::ZeroVariance, "row " + std::to_string(i) + " is constant");
    norms(i) = std::sqrt(ss);
  }

  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (Eigen::Index t = 0; t < t_obs; ++t) dot += centered(i, t) * centered(j, t);
      const double r = std::clamp(dot / (norms(i) * norms(j)), -1.0, 1.0);
      c(i, j) = r;
      c(j, i) = r;
    }
  }
  return c;
}

inline CorrMatrix correlation_matrix(const ReturnPanel& rp, std::optional<Period> window = std::nullopt) {
  if (!rp.normalized) fail(ErrorCode::NotNormalized, "correlation expects sigma-normalized returns");
  if (rp.n_obs() < 3) fail(ErrorCode::TooFewObservations, std::to_string(rp.n_obs()) + " observation(s)");
  return CorrMatrix{rp.index_ids, pearson_matrix(rp.returns), std::move(window)};
}

/// Population moments over the N(N-1)/2 coefficients above the diagonal.
inline CorrMoments corr_moments(const CorrMatrix& cm) {
  const auto n = static_cast<Eigen::Index>(cm.size());
  if (n < 3) fail(ErrorCode::TooFewIndices, std::to_string(n) + " index(es), need at least 3");

  std::vector<double> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.push_back(cm.values(i, j));
  }

  CorrMoments m;
  m.n_pairs = pairs.size();
  const double count = static_cast<double>(pairs.size());
  double sum = 0.0, max_abs = 0.0;
  for (double v : pairs) {
    sum += v;
    max_abs = std::max(max_abs, std::abs(v));
  }
  m.mean = sum / count;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : pairs) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= count;
  m3 /= count;
  m4 /= count;

  m.std = std::sqrt(m2);
  // Identical coefficients leave only rounding residue in m2.
  if (m.std <= 1e-14 * max_abs) {
    m.std = 0.0;
    return m;
  }
  m.skewness = m3 / std::pow(m2, 1.5);
  m.kurtosis = m4 / (m2 * m2);
  return m;
}

/// d = sqrt(2(1 - C)), zero on the diagonal.
inline DistMatrix distance_matrix(const CorrMatrix& cm) {
  const auto n = static_cast<Eigen::Index>(cm.size());
  DistMatrix dm{cm.index_ids, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) dm.values(i, j) = std::sqrt(std::max(0.0, 2.0 * (1.0 - cm.values(i, j))));
    }
  }
  return dm;
}

}  // namespace corrnet
