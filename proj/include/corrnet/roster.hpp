#pragma once

#include <array>
#include <string_view>

#include "corrnet/geo_scaling.hpp"
#include "corrnet/market_data.hpp"

namespace corrnet {

struct RosterEntry {
  std::string_view ticker;
  std::string_view zone;
  std::string_view city;  // host city of the exchange
  double lat;
  double lon;
};

inline constexpr std::string_view kEuropean = "European";
inline constexpr std::string_view kAsianAustralian = "Asian-Australian";
inline constexpr std::string_view kAmerican = "American";

/// The 35 world indices: 17 European, 13 Asian-Australian, 5 American.
inline constexpr std::array<RosterEntry, 35> kDefaultRoster{{
    {"FRA", kEuropean, "Paris", 48.8566, 2.3522},
    {"GER", kEuropean, "Frankfurt", 50.1109, 8.6821},
    {"ITA", kEuropean, "Milan", 45.4642, 9.1900},
    {"UK", kEuropean, "London", 51.5074, -0.1278},
    {"ESP", kEuropean, "Madrid", 40.4168, -3.7038},
    {"SWIZ", kEuropean, "Zurich", 47.3769, 8.5417},
    {"NETH", kEuropean, "Amsterdam", 52.3676, 4.9041},
    {"BEL", kEuropean, "Brussels", 50.8503, 4.3517},
    {"NOR", kEuropean, "Oslo", 59.9139, 10.7522},
    {"IRL", kEuropean, "Dublin", 53.3498, -6.2603},
    {"GRC", kEuropean, "Athens", 37.9838, 23.7275},
    {"FIN", kEuropean, "Helsinki", 60.1699, 24.9384},
    {"DEN", kEuropean, "Copenhagen", 55.6761, 12.5683},
    {"AUT", kEuropean, "Vienna", 48.2082, 16.3738},
    {"TUR", kEuropean, "Istanbul", 41.0082, 28.9784},
    {"SWE", kEuropean, "Stockholm", 59.3293, 18.0686},
    {"RUS", kEuropean, "Moscow", 55.7558, 37.6173},
    {"JPN", kAsianAustralian, "Tokyo", 35.6762, 139.6503},
    {"KOR", kAsianAustralian, "Seoul", 37.5665, 126.9780},
    {"SING", kAsianAustralian, "Singapore", 1.3521, 103.8198},
    {"HONG", kAsianAustralian, "Hong Kong", 22.3193, 114.1694},
    {"INDO", kAsianAustralian, "Jakarta", -6.2088, 106.8456},
    {"TWN", kAsianAustralian, "Taipei", 25.0330, 121.5654},
    {"MAL", kAsianAustralian, "Kuala Lumpur", 3.1390, 101.6869},
    {"CHA", kAsianAustralian, "Shanghai", 31.2304, 121.4737},
    {"THAI", kAsianAustralian, "Bangkok", 13.7563, 100.5018},
    {"IND", kAsianAustralian, "Mumbai", 19.0760, 72.8777},
    {"PHL", kAsianAustralian, "Manila", 14.5995, 120.9842},
    {"ISR", kAsianAustralian, "Tel Aviv", 32.0853, 34.7818},
    {"AUS", kAsianAustralian, "Sydney", -33.8688, 151.2093},
    {"US", kAmerican, "New York", 40.7128, -74.0060},
    {"CAN", kAmerican, "Toronto", 43.6532, -79.3832},
    {"MEX", kAmerican, "Mexico City", 19.4326, -99.1332},
    {"ARG", kAmerican, "Buenos Aires", -34.6037, -58.3816},
    {"BRA", kAmerican, "Sao Paulo", -23.5505, -46.6333},
}};

inline ZonePartition default_zones() {
  ZonePartition zones;
  for (const auto& e : kDefaultRoster) zones.emplace(e.ticker, e.zone);
  return zones;
}

inline CoordinateTable default_coordinates() {
  CoordinateTable table;
  for (const auto& e : kDefaultRoster) table.emplace(e.ticker, CityLocation{std::string(e.city), {e.lat, e.lon}});
  return table;
}

}  // namespace corrnet
