#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "corrnet/geo_scaling.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace corrnet;

namespace {

constexpr LatLon kParis{48.8566, 2.3522};
constexpr LatLon kLondon{51.5074, -0.1278};

// Central angle from unit vectors, a different route from the haversine form.
double vector_great_circle_km(LatLon a, LatLon b) {
  const double deg = std::numbers::pi / 180.0;
  auto unit = [&](LatLon p) {
    return std::array<double, 3>{std::cos(p.lat * deg) * std::cos(p.lon * deg), std::cos(p.lat * deg) * std::sin(p.lon * deg),
                                 std::sin(p.lat * deg)};
  };
  const auto u = unit(a);
  const auto v = unit(b);
  const std::array<double, 3> cross{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  const double sin_angle = std::hypot(cross[0], cross[1], cross[2]);
  const double cos_angle = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return 6371.0 * std::atan2(sin_angle, cos_angle);
}

LatLon random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  return {lat(rng), lon(rng)};
}

HubReport path_hub_at_end() {
  return HubReport{"a", 0, 1, {{"a", 0}, {"b", 1}, {"c", 2}}};
}

}  // namespace

TEST(Haversine, Examples) {
  EXPECT_EQ(haversine_km(kParis, kParis), 0.0);
  EXPECT_NEAR(haversine_km({0, 0}, {0, 180}), std::numbers::pi * 6371.0, 1e-9);
  const double km = haversine_km(kParis, kLondon);
  EXPECT_NEAR(km, 343.5, 1.0);
  EXPECT_NEAR(km, vector_great_circle_km(kParis, kLondon), 1e-6);
  EXPECT_CORRNET_ERROR(haversine_km({91, 0}, kParis), ErrorCode::OutOfRangeCoordinate);
  EXPECT_CORRNET_ERROR(haversine_km(kParis, {0, 180.5}), ErrorCode::OutOfRangeCoordinate);
}

TEST(Haversine, MetricProperties) {
  std::mt19937_64 rng(6371);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_point(rng), b = random_point(rng), c = random_point(rng);
    const double ab = haversine_km(a, b);
    EXPECT_EQ(ab, haversine_km(b, a));
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(haversine_km(a, c), ab + haversine_km(b, c) + 1e-9);
    EXPECT_NEAR(ab, vector_great_circle_km(a, b), 1e-6);
  }
}

TEST(LoadCoordinates, ParsesAndValidates) {
  auto table = load_coordinates("index,city,lat,lon\nFRA,Paris,48.8566,2.3522\nGBR,London,51.5074,-0.1278\n");
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table.at("FRA").city, "Paris");
  EXPECT_DOUBLE_EQ(table.at("GBR").position.lon, -0.1278);
  EXPECT_CORRNET_ERROR(load_coordinates("index,city,lat,lon\nX,Y,95,0\n"), ErrorCode::OutOfRangeCoordinate);
  EXPECT_CORRNET_ERROR(load_coordinates("index,city,lat,lon\nX,Y,abc,0\n"), ErrorCode::MalformedCsv);
  EXPECT_CORRNET_ERROR(load_coordinates("index,city,lat,lon\nX,Y,1,0\nX,Z,2,0\n"), ErrorCode::DuplicateIndexId);
}

TEST(ScalingPoints, PathWithHubAtEnd) {
  CoordinateTable coords{{"a", {"Paris", kParis}}, {"b", {"London", kLondon}}, {"c", {"Madrid", {40.4168, -3.7038}}}};
  auto points = scaling_points(path_hub_at_end(), coords);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].index_id, "b");
  EXPECT_EQ(points[0].hops, 1u);
  EXPECT_EQ(points[1].hops, 2u);
  EXPECT_DOUBLE_EQ(points[0].geo_km, haversine_km(kParis, kLondon));
  EXPECT_TRUE(points[0].in_fit && points[1].in_fit);
}

TEST(ScalingPoints, SameCityExcludedAndMissingEntry) {
  CoordinateTable coords{{"a", {"Paris", kParis}}, {"b", {"Paris", kParis}}, {"c", {"London", kLondon}}};
  auto points = scaling_points(path_hub_at_end(), coords);
  EXPECT_FALSE(points[0].in_fit);
  EXPECT_EQ(points[0].geo_km, 0.0);
  EXPECT_TRUE(points[1].in_fit);
  coords.erase("c");
  EXPECT_CORRNET_ERROR(scaling_points(path_hub_at_end(), coords), ErrorCode::MissingCoordinate);

  HubReport pair{"a", 0, 1, {{"a", 0}, {"b", 1}}};
  EXPECT_EQ(scaling_points(pair, {{"a", {"Paris", kParis}}, {"b", {"London", kLondon}}}).size(), 1u);
}

TEST(PowerLawFit, ExactPowerLaw) {
  auto fit = power_law_fit(std::vector<std::pair<double, double>>{{1, 2}, {4, 4}, {9, 6}});
  EXPECT_NEAR(fit.alpha, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(2.0), 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.alpha_stderr, 0.0, 1e-12);
  EXPECT_EQ(fit.n_points, 3u);
  EXPECT_FALSE(fit.flat);
}

TEST(PowerLawFit, FlatAndErrors) {
  auto fit = power_law_fit(std::vector<std::pair<double, double>>{{1, 3}, {2, 3}, {5, 3}});
  EXPECT_EQ(fit.alpha, 0.0);
  EXPECT_EQ(fit.r_squared, 0.0);
  EXPECT_TRUE(fit.flat);
  using Pts = std::vector<std::pair<double, double>>;
  EXPECT_CORRNET_ERROR(power_law_fit(Pts{{1, 1}, {2, 2}}), ErrorCode::TooFewPoints);
  EXPECT_CORRNET_ERROR(power_law_fit(Pts{{1, 1}, {2, 2}, {0, 3}}), ErrorCode::NonPositiveValue);
  EXPECT_CORRNET_ERROR(power_law_fit(Pts{{1, 1}, {2, -2}, {3, 3}}), ErrorCode::NonPositiveValue);
  EXPECT_CORRNET_ERROR(power_law_fit(Pts{{2, 1}, {2, 2}, {2, 3}}), ErrorCode::DegenerateFit);
}

TEST(PowerLawFit, SkipsExcludedScalingPoints) {
  std::vector<ScalingPoint> points{{"a", 0.0, 1, false}, {"b", 1.0, 2, true}, {"c", 4.0, 4, true}, {"d", 9.0, 6, true}};
  auto fit = power_law_fit(points);
  EXPECT_EQ(fit.n_points, 3u);
  EXPECT_NEAR(fit.alpha, 0.5, 1e-12);
}

TEST(PowerLawFit, ScaleCovariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> km(100, 9000);
  std::uniform_int_distribution<int> hops(1, 6);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 20; ++i) pts.emplace_back(km(rng), hops(rng));
  const auto base = power_law_fit(pts);
  for (double c : {0.001, 0.5, 7.0, 1e4}) {
    auto scaled = pts;
    for (auto& p : scaled) p.first *= c;
    const auto fit = power_law_fit(scaled);
    EXPECT_NEAR(fit.alpha, base.alpha, 1e-9);
    EXPECT_NEAR(fit.r_squared, base.r_squared, 1e-9);
    EXPECT_NEAR(fit.intercept, base.intercept - base.alpha * std::log(c), 1e-9);
  }
}

TEST(PowerLawFit, MonteCarloRecoveryAndCoverage) {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> km(300, 18000);
  std::normal_distribution<double> noise(0.0, 0.1);
  const double alpha = 0.7;
  int within = 0, covered = 0;
  const int draws = 1000;
  for (int d = 0; d < draws; ++d) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 34; ++i) {
      const double l = km(rng);
      pts.emplace_back(l, 0.02 * std::pow(l, alpha) * std::exp(noise(rng)));
    }
    const auto fit = power_law_fit(pts);
    if (std::abs(fit.alpha - alpha) <= 0.15) ++within;
    if (std::abs(fit.alpha - alpha) <= 2.0 * fit.alpha_stderr) ++covered;
  }
  EXPECT_EQ(within, draws);
  EXPECT_GE(covered, 900);
}

TEST(KsTwoSample, Examples) {
  auto same = ks_two_sample({1, 2, 3}, {1, 2, 3});
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_FALSE(same.reject_at_5pct);

  EXPECT_EQ(ks_two_sample({0, 1}, {10, 11}).statistic, 1.0);

  auto third = ks_two_sample({1, 2, 3}, {1.5, 2.5, 3.5});
  EXPECT_NEAR(third.statistic, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(third.statistic, oracle::ks_statistic({1, 2, 3}, {1.5, 2.5, 3.5}), 1e-15);

  EXPECT_CORRNET_ERROR(ks_two_sample({}, {1.0}), ErrorCode::EmptySample);
}

TEST(KsTwoSample, AgreesWithOracles) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 40);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> tie(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(size(rng))), b(static_cast<std::size_t>(size(rng)));
    // Half the trials draw from a small integer set to force ties.
    const bool ties = trial % 2 == 0;
    for (auto& x : a) x = ties ? tie(rng) : z(rng);
    for (auto& x : b) x = ties ? tie(rng) : z(rng) + 0.5;
    const auto r = ks_two_sample(a, b);
    EXPECT_NEAR(r.statistic, oracle::ks_statistic(a, b), 1e-15);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double lambda = std::sqrt(na * nb / (na + nb)) * r.statistic;
    if (lambda >= 0.05) {
      EXPECT_NEAR(r.p_value, oracle::kolmogorov_series(lambda), 1e-12);
    }
    EXPECT_EQ(r.reject_at_5pct, r.p_value < 0.05);
  }
  // Known quantile of the Kolmogorov distribution.
  EXPECT_NEAR(kolmogorov_tail(1.3581), 0.05, 1e-4);
}

TEST(KsTwoSample, InvariantUnderIncreasingTransform) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(25), b(17);
    for (auto& x : a) x = z(rng);
    for (auto& x : b) x = z(rng) * 2;
    auto ta = a, tb = b;
    for (auto& x : ta) x = std::exp(3 * x) + x;
    for (auto& x : tb) x = std::exp(3 * x) + x;
    EXPECT_EQ(ks_two_sample(a, b).statistic, ks_two_sample(ta, tb).statistic);
  }
}
