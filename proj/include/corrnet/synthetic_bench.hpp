#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrnet/date.hpp"
#include "corrnet/error.hpp"
#include "corrnet/market_data.hpp"
#include "corrnet/returns_volatility.hpp"
#include "corrnet/roster.hpp"

namespace corrnet {

/// SplitMix64 (Steele, Lea, Flood 2014); used only to expand a seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman and Vigna), state seeded from four SplitMix64
/// outputs. Satisfies std::uniform_random_bit_generator.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 init(seed);
    for (auto& word : s_) word = init.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

/// Standard normals by the basic Box-Muller transform; both outputs of each
/// pair are used, cosine branch first.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  Xoshiro256StarStar& engine() { return rng_; }

 private:
  Xoshiro256StarStar rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Block {
  std::string label;
  std::size_t size = 0;
  double intra = 0.0;
  std::vector<std::string> ids;  // optional; defaults to label_01, label_02, ...
};

struct BlockSpec {
  std::vector<Block> blocks;
  double inter = 0.0;
  std::size_t n_obs = 0;
  double return_std = 0.01;
  std::uint64_t seed = 0;
  Date start_date{2006, 6, 1};  // date of the base price
};

inline std::vector<std::string> block_index_ids(const BlockSpec& spec) {
  std::vector<std::string> ids;
  for (const auto& b : spec.blocks) {
    for (std::size_t k = 0; k < b.size; ++k) {
      if (!b.ids.empty()) {
        ids.push_back(b.ids[k]);
      } else {
        ids.push_back(b.label + (k + 1 < 10 ? "_0" : "_") + std::to_string(k + 1));
      }
    }
  }
  return ids;
}

inline Eigen::MatrixXd target_correlation(const BlockSpec& spec) {
  std::vector<std::size_t> block_of;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) block_of.insert(block_of.end(), spec.blocks[b].size, b);
  const auto n = static_cast<Eigen::Index>(block_of.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto bi = block_of[static_cast<std::size_t>(i)];
      const auto bj = block_of[static_cast<std::size_t>(j)];
      c(i, j) = i == j ? 1.0 : bi == bj ? spec.blocks[bi].intra : spec.inter;
    }
  }
  return c;
}

inline void validate(const BlockSpec& spec) {
  if (spec.blocks.empty()) fail(ErrorCode::InfeasibleSpec, "no blocks");
  if (spec.n_obs < 3) fail(ErrorCode::InfeasibleSpec, "n_obs must be at least 3");
  if (!(spec.return_std > 0.0)) fail(ErrorCode::InfeasibleSpec, "return_std must be positive");
  if (!(spec.inter >= 0.0)) fail(ErrorCode::InfeasibleSpec, "inter must be non-negative");
  for (const auto& b : spec.blocks) {
    if (b.size == 0) fail(ErrorCode::InfeasibleSpec, "block '" + b.label + "' is empty");
    if (!(b.intra >= 0.0 && b.intra < 1.0)) fail(ErrorCode::InfeasibleSpec, "intra of '" + b.label + "' outside [0, 1)");
    // The one-global-factor construction needs inter <= intra in every block.
    if (spec.inter > b.intra) fail(ErrorCode::InfeasibleSpec, "inter exceeds intra of '" + b.label + "'");
    if (!b.ids.empty() && b.ids.size() != b.size) fail(ErrorCode::InfeasibleSpec, "ids of '" + b.label + "' do not match size");
  }
  auto ids = block_index_ids(spec);
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    fail(ErrorCode::InfeasibleSpec, "index ids are not unique");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(target_correlation(spec), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) fail(ErrorCode::InfeasibleSpec, "target correlation is not positive semidefinite");
}

/// Weekdays only, starting at `start` (moved forward off a weekend).
inline std::vector<Date> business_days(Date start, std::size_t count) {
  std::vector<Date> out;
  out.reserve(count);
  for (Date d = start; out.size() < count; d = d.plus_days(1)) {
    const auto wd = d.weekday();
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
  }
  return out;
}

/// Raw Gaussian returns r_i = s (sqrt(inter) g + sqrt(intra_b - inter) f_b +
/// sqrt(1 - intra_b) e_i), with g, f_b, e_i independent standard normals, so
/// corr = intra_b inside block b and inter across blocks. Per date the draws
/// are taken in the order g, f_1..f_B, e_1..e_N.
inline ReturnPanel generate_block_returns(const BlockSpec& spec) {
  validate(spec);
  const auto ids = block_index_ids(spec);
  const auto n = static_cast<Eigen::Index>(ids.size());
  const auto t_obs = static_cast<Eigen::Index>(spec.n_obs);

  std::vector<std::size_t> block_of;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) block_of.insert(block_of.end(), spec.blocks[b].size, b);

  GaussianSource gauss(spec.seed);
  const double global_load = std::sqrt(spec.inter);
  Eigen::MatrixXd returns(n, t_obs);
  std::vector<double> block_factor(spec.blocks.size());
  for (Eigen::Index t = 0; t < t_obs; ++t) {
    const double g = gauss.next();
    for (auto& f : block_factor) f = gauss.next();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& block = spec.blocks[block_of[static_cast<std::size_t>(i)]];
      const double r = global_load * g + std::sqrt(block.intra - spec.inter) * block_factor[block_of[static_cast<std::size_t>(i)]] +
                       std::sqrt(1.0 - block.intra) * gauss.next();
      returns(i, t) = spec.return_std * r;
    }
  }

  const auto days = business_days(spec.start_date, spec.n_obs + 1);
  ReturnPanel rp;
  rp.index_ids = ids;
  rp.dates.assign(days.begin() + 1, days.end());
  rp.returns = std::move(returns);
  rp.sigma.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rp.sigma(i) = detail::sample_stddev(rp.returns.row(i));
    if (!(rp.sigma(i) > 0.0)) fail(ErrorCode::ZeroVariance, ids[static_cast<std::size_t>(i)]);
  }
  return rp;
}

/// Prices 100 * exp(cumulative return), with the base price on the first
/// business day.
inline PricePanel block_prices(const BlockSpec& spec) {
  const auto rp = generate_block_returns(spec);
  PricePanel panel;
  panel.index_ids = rp.index_ids;
  panel.dates = business_days(spec.start_date, 1);
  panel.dates.insert(panel.dates.end(), rp.dates.begin(), rp.dates.end());
  panel.prices.resize(rp.returns.rows(), rp.returns.cols() + 1);
  for (Eigen::Index i = 0; i < rp.returns.rows(); ++i) {
    double cumulative = 0.0;
    panel.prices(i, 0) = 100.0;
    for (Eigen::Index t = 0; t < rp.returns.cols(); ++t) {
      cumulative += rp.returns(i, t);
      panel.prices(i, t + 1) = 100.0 * std::exp(cumulative);
    }
  }
  return panel;
}

inline ZonePartition block_zones(const BlockSpec& spec) {
  ZonePartition zones;
  const auto ids = block_index_ids(spec);
  std::size_t k = 0;
  for (const auto& b : spec.blocks) {
    for (std::size_t j = 0; j < b.size; ++j) zones.emplace(ids[k++], b.label);
  }
  return zones;
}

/// Three zones shaped like the 35-index roster (17 / 13 / 5) using its
/// tickers, so the default zone and coordinate tables apply.
inline BlockSpec roster_block_spec(std::uint64_t seed = 2008, std::size_t n_obs = 1500) {
  BlockSpec spec;
  const std::array<std::pair<std::string_view, double>, 3> zones{{
      {kEuropean, 0.7},
      {kAsianAustralian, 0.6},
      {kAmerican, 0.65},
  }};
  for (const auto& [zone, intra] : zones) {
    Block b{std::string(zone), 0, intra, {}};
    for (const auto& e : kDefaultRoster) {
      if (e.zone == zone) b.ids.emplace_back(e.ticker);
    }
    b.size = b.ids.size();
    spec.blocks.push_back(std::move(b));
  }
  spec.inter = 0.25;
  spec.n_obs = n_obs;
  spec.return_std = 0.01;
  spec.seed = seed;
  return spec;
}

}  // namespace corrnet
