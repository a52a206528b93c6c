#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "corrnet/correlation.hpp"
#include "corrnet/error.hpp"
#include "corrnet/export.hpp"
#include "corrnet/geo_scaling.hpp"
#include "corrnet/market_data.hpp"
#include "corrnet/mst.hpp"
#include "corrnet/returns_volatility.hpp"
#include "corrnet/synthetic_bench.hpp"
#include "corrnet/threshold_network.hpp"

namespace corrnet {

inline constexpr std::string_view kVersion = "0.1.0";

using json = nlohmann::json;

struct RunConfig {
  std::filesystem::path prices_path;
  std::filesystem::path coords_path;  // empty: no coordinates known
  std::filesystem::path zones_path;   // empty: no zones known
  std::vector<Period> periods = default_periods();
  std::vector<double> k_values{0.0, 1.0, 2.0};
  std::size_t max_fill = 5;
  std::optional<std::string> hub_override;
  std::size_t lowess_span = 5;
  std::filesystem::path output_dir = "corrnet_out";
};

struct MomentsRow {
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
  std::size_t n_pairs = 0;
  double mean_volatility = 0.0;

  friend bool operator==(const MomentsRow&, const MomentsRow&) = default;
};

struct NetworkBlock {
  double k = 0.0;
  double theta = 0.0;
  std::size_t n_edges = 0;
  std::size_t n_components = 0;
  std::size_t largest_cluster = 0;
  std::optional<double> char_path_length;
  bool path_length_on_largest_component = false;
  double global_efficiency = 0.0;
  std::optional<double> intensity_largest_cluster;
  std::optional<double> modularity_zones;
  std::optional<double> modularity_detected;
  std::optional<std::vector<std::vector<std::string>>> communities;

  friend bool operator==(const NetworkBlock&, const NetworkBlock&) = default;
};

struct TreeEdgeRow {
  std::string a;
  std::string b;
  double distance = 0.0;

  friend bool operator==(const TreeEdgeRow&, const TreeEdgeRow&) = default;
};

struct MstSummary {
  std::string hub;
  std::size_t hub_degree = 0;
  double avg_tree_length = 0.0;
  double modularity_zones = 0.0;
  std::vector<TreeEdgeRow> edges;
  std::map<std::string, std::size_t> hops;

  friend bool operator==(const MstSummary&, const MstSummary&) = default;
};

struct ScalingSummary {
  FitResult fit;
  std::size_t n_excluded = 0;
  KsResult ks;

  friend bool operator==(const ScalingSummary&, const ScalingSummary&) = default;
};

struct PeriodReport {
  std::string name;
  std::string start;
  std::string end;
  std::size_t n_dates = 0;
  MomentsRow moments;
  std::vector<NetworkBlock> networks;
  MstSummary mst;
  ScalingSummary scaling;

  friend bool operator==(const PeriodReport&, const PeriodReport&) = default;
};

struct Report {
  std::string version;
  std::string config_hash;
  std::string input_hash;
  std::vector<PeriodReport> periods;

  friend bool operator==(const Report&, const Report&) = default;
};

// ---------------------------------------------------------------------------
// JSON mapping. Keys are emitted sorted (nlohmann's default object map).

namespace detail {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace detail

inline void to_json(json& j, const MomentsRow& m) {
  j = json{{"mean", m.mean},
           {"std", m.std},
           {"skewness", detail::optional_json(m.skewness)},
           {"kurtosis", detail::optional_json(m.kurtosis)},
           {"n_pairs", m.n_pairs},
           {"mean_volatility", m.mean_volatility}};
}

inline void from_json(const json& j, MomentsRow& m) {
  m.mean = j.at("mean").get<double>();
  m.std = j.at("std").get<double>();
  m.skewness = detail::optional_from<double>(j, "skewness");
  m.kurtosis = detail::optional_from<double>(j, "kurtosis");
  m.n_pairs = j.at("n_pairs").get<std::size_t>();
  m.mean_volatility = j.at("mean_volatility").get<double>();
}

inline void to_json(json& j, const NetworkBlock& n) {
  j = json{{"k", n.k},
           {"theta", n.theta},
           {"n_edges", n.n_edges},
           {"n_components", n.n_components},
           {"largest_cluster", n.largest_cluster},
           {"char_path_length", detail::optional_json(n.char_path_length)},
           {"path_length_on_largest_component", n.path_length_on_largest_component},
           {"global_efficiency", n.global_efficiency},
           {"intensity_largest_cluster", detail::optional_json(n.intensity_largest_cluster)},
           {"modularity_zones", detail::optional_json(n.modularity_zones)},
           {"modularity_detected", detail::optional_json(n.modularity_detected)},
           {"communities", detail::optional_json(n.communities)}};
}

inline void from_json(const json& j, NetworkBlock& n) {
  n.k = j.at("k").get<double>();
  n.theta = j.at("theta").get<double>();
  n.n_edges = j.at("n_edges").get<std::size_t>();
  n.n_components = j.at("n_components").get<std::size_t>();
  n.largest_cluster = j.at("largest_cluster").get<std::size_t>();
  n.char_path_length = detail::optional_from<double>(j, "char_path_length");
  n.path_length_on_largest_component = j.at("path_length_on_largest_component").get<bool>();
  n.global_efficiency = j.at("global_efficiency").get<double>();
  n.intensity_largest_cluster = detail::optional_from<double>(j, "intensity_largest_cluster");
  n.modularity_zones = detail::optional_from<double>(j, "modularity_zones");
  n.modularity_detected = detail::optional_from<double>(j, "modularity_detected");
  n.communities = detail::optional_from<std::vector<std::vector<std::string>>>(j, "communities");
}

inline void to_json(json& j, const TreeEdgeRow& e) { j = json::array({e.a, e.b, e.distance}); }

inline void from_json(const json& j, TreeEdgeRow& e) {
  if (!j.is_array() || j.size() != 3) throw json::type_error::create(302, "tree edge must be [id, id, distance]", &j);
  e.a = j[0].get<std::string>();
  e.b = j[1].get<std::string>();
  e.distance = j[2].get<double>();
}

inline void to_json(json& j, const MstSummary& m) {
  j = json{{"hub", m.hub},
           {"hub_degree", m.hub_degree},
           {"avg_tree_length", m.avg_tree_length},
           {"modularity_zones", m.modularity_zones},
           {"edges", m.edges},
           {"hops", m.hops}};
}

inline void from_json(const json& j, MstSummary& m) {
  m.hub = j.at("hub").get<std::string>();
  m.hub_degree = j.at("hub_degree").get<std::size_t>();
  m.avg_tree_length = j.at("avg_tree_length").get<double>();
  m.modularity_zones = j.at("modularity_zones").get<double>();
  m.edges = j.at("edges").get<std::vector<TreeEdgeRow>>();
  m.hops = j.at("hops").get<std::map<std::string, std::size_t>>();
}

inline void to_json(json& j, const FitResult& f) {
  j = json{{"alpha", f.alpha},       {"stderr", f.alpha_stderr}, {"intercept", f.intercept},
           {"r_squared", f.r_squared}, {"n_points", f.n_points},   {"flat", f.flat}};
}

inline void from_json(const json& j, FitResult& f) {
  f.alpha = j.at("alpha").get<double>();
  f.alpha_stderr = j.at("stderr").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.r_squared = j.at("r_squared").get<double>();
  f.n_points = j.at("n_points").get<std::size_t>();
  f.flat = j.at("flat").get<bool>();
}

inline void to_json(json& j, const KsResult& k) {
  j = json{{"statistic", k.statistic}, {"p_value", k.p_value}, {"reject_at_5pct", k.reject_at_5pct}};
}

inline void from_json(const json& j, KsResult& k) {
  k.statistic = j.at("statistic").get<double>();
  k.p_value = j.at("p_value").get<double>();
  k.reject_at_5pct = j.at("reject_at_5pct").get<bool>();
}

inline void to_json(json& j, const ScalingSummary& s) {
  j = s.fit;
  j["n_excluded"] = s.n_excluded;
  j["ks"] = s.ks;
}

inline void from_json(const json& j, ScalingSummary& s) {
  s.fit = j.get<FitResult>();
  s.n_excluded = j.at("n_excluded").get<std::size_t>();
  s.ks = j.at("ks").get<KsResult>();
}

inline void to_json(json& j, const PeriodReport& p) {
  j = json{{"name", p.name},       {"start", p.start},       {"end", p.end}, {"n_dates", p.n_dates},
           {"moments", p.moments}, {"networks", p.networks}, {"mst", p.mst}, {"scaling", p.scaling}};
}

inline void from_json(const json& j, PeriodReport& p) {
  p.name = j.at("name").get<std::string>();
  p.start = j.at("start").get<std::string>();
  p.end = j.at("end").get<std::string>();
  p.n_dates = j.at("n_dates").get<std::size_t>();
  p.moments = j.at("moments").get<MomentsRow>();
  p.networks = j.at("networks").get<std::vector<NetworkBlock>>();
  p.mst = j.at("mst").get<MstSummary>();
  p.scaling = j.at("scaling").get<ScalingSummary>();
}

inline void to_json(json& j, const Report& r) {
  j = json{{"version", r.version},
           {"config_hash", r.config_hash},
           {"input_hash", r.input_hash},
           {"periods", r.periods}};
}

inline void from_json(const json& j, Report& r) {
  r.version = j.at("version").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.input_hash = j.at("input_hash").get<std::string>();
  r.periods = j.at("periods").get<std::vector<PeriodReport>>();
}

/// Sorted keys, shortest round-trip floats, two-space indent.
inline std::string export_json_report(const Report& r) { return json(r).dump(2) + "\n"; }

inline Report parse_json_report(std::string_view text) { return json::parse(text).get<Report>(); }

// ---------------------------------------------------------------------------
// Configuration.

inline json config_to_json(const RunConfig& c, bool include_output_dir = true) {
  json periods = json::array();
  for (const auto& p : c.periods) periods.push_back({{"name", p.name}, {"start", p.start.iso()}, {"end", p.end.iso()}});
  json j{{"prices", c.prices_path.generic_string()},
         {"coords", c.coords_path.empty() ? json(nullptr) : json(c.coords_path.generic_string())},
         {"zones", c.zones_path.empty() ? json(nullptr) : json(c.zones_path.generic_string())},
         {"periods", periods},
         {"k_values", c.k_values},
         {"max_fill", c.max_fill},
         {"hub", detail::optional_json(c.hub_override)},
         {"lowess_span", c.lowess_span}};
  if (include_output_dir) j["output_dir"] = c.output_dir.generic_string();
  return j;
}

namespace detail {

inline Date parse_date_field(const json& j, const std::string& what) {
  auto d = Date::parse(j.get<std::string>());
  if (!d) fail(ErrorCode::InvalidConfig, what + " is not a YYYY-MM-DD date");
  return *d;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace detail

/// Reads a run configuration. Relative paths are taken relative to `base_dir`.
inline RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string> known{"prices", "coords",      "zones",     "periods",
                                           "k_values", "max_fill", "hub", "lowess_span", "output_dir"};
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) fail(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("prices")) c.prices_path = detail::resolve(base_dir, j["prices"].get<std::string>());
    if (j.contains("coords") && !j["coords"].is_null()) c.coords_path = detail::resolve(base_dir, j["coords"].get<std::string>());
    if (j.contains("zones") && !j["zones"].is_null()) c.zones_path = detail::resolve(base_dir, j["zones"].get<std::string>());
    if (j.contains("periods")) {
      c.periods.clear();
      for (const auto& p : j["periods"]) {
        const auto name = p.at("name").get<std::string>();
        c.periods.push_back({name, detail::parse_date_field(p.at("start"), name + ".start"),
                             detail::parse_date_field(p.at("end"), name + ".end")});
      }
    }
    if (j.contains("k_values")) c.k_values = j["k_values"].get<std::vector<double>>();
    if (j.contains("max_fill")) c.max_fill = j["max_fill"].get<std::size_t>();
    if (j.contains("hub") && !j["hub"].is_null()) c.hub_override = j["hub"].get<std::string>();
    if (j.contains("lowess_span")) c.lowess_span = j["lowess_span"].get<std::size_t>();
    if (j.contains("output_dir")) c.output_dir = detail::resolve(base_dir, j["output_dir"].get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

inline void validate(const RunConfig& c) {
  if (c.prices_path.empty()) fail(ErrorCode::InvalidConfig, "no prices file given");
  if (c.k_values.empty()) fail(ErrorCode::InvalidConfig, "k_values is empty");
  if (c.periods.empty()) fail(ErrorCode::InvalidConfig, "no periods given");
  if (c.lowess_span < 2) fail(ErrorCode::InvalidConfig, "lowess_span must be at least 2");
  for (double k : c.k_values) {
    if (!std::isfinite(k)) fail(ErrorCode::InvalidConfig, "k values must be finite");
  }
  std::set<double> distinct(c.k_values.begin(), c.k_values.end());
  if (distinct.size() != c.k_values.size()) fail(ErrorCode::InvalidConfig, "duplicate k value");
  for (const auto& p : c.periods) {
    if (p.name.empty() || p.name == "." || p.name == ".." || p.name.find_first_of("/\\") != std::string::npos) {
      fail(ErrorCode::InvalidConfig, "period name '" + p.name + "' cannot be used as a directory name");
    }
  }
  try {
    validate_periods(c.periods);
  } catch (const Error& e) {
    fail(ErrorCode::InvalidConfig, e.message());
  }
}

inline BlockSpec block_spec_from_json(const json& j) {
  BlockSpec spec;
  try {
    for (const auto& b : j.at("blocks")) {
      Block block;
      block.label = b.at("label").get<std::string>();
      block.intra = b.at("intra").get<double>();
      if (b.contains("ids")) block.ids = b["ids"].get<std::vector<std::string>>();
      block.size = b.contains("size") ? b["size"].get<std::size_t>() : block.ids.size();
      spec.blocks.push_back(std::move(block));
    }
    spec.inter = j.at("inter").get<double>();
    spec.n_obs = j.at("n_obs").get<std::size_t>();
    spec.return_std = j.value("return_std", 0.01);
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("start_date")) spec.start_date = detail::parse_date_field(j["start_date"], "start_date");
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
  return spec;
}

inline json block_spec_to_json(const BlockSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.blocks) {
    json block{{"label", b.label}, {"size", b.size}, {"intra", b.intra}};
    if (!b.ids.empty()) block["ids"] = b.ids;
    blocks.push_back(block);
  }
  return json{{"blocks", blocks},         {"inter", spec.inter}, {"n_obs", spec.n_obs},
              {"return_std", spec.return_std}, {"seed", spec.seed}, {"start_date", spec.start_date.iso()}};
}

// ---------------------------------------------------------------------------
// Pipeline.

/// 64-bit FNV-1a, hex encoded. Used to fingerprint inputs, not for security.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Everything computed for one analysis window.
struct WindowAnalysis {
  PricePanel prices;
  ReturnPanel raw;
  ReturnPanel normalized;
  CorrMatrix corr;
  CorrMoments moments;
  DistMatrix dist;
};

inline WindowAnalysis analyze_window(const PricePanel& aligned, const std::optional<Period>& period) {
  WindowAnalysis w;
  w.prices = period ? slice_period(aligned, *period) : aligned;
  w.raw = log_returns(w.prices);
  w.normalized = normalize_returns(w.raw);
  w.corr = correlation_matrix(w.normalized, period);
  w.moments = corr_moments(w.corr);
  w.dist = distance_matrix(w.corr);
  return w;
}

inline NetworkBlock network_block(const Graph& g, const GraphMetrics& m, double k, double theta) {
  NetworkBlock b;
  b.k = k;
  b.theta = theta;
  b.n_edges = m.n_edges;
  b.n_components = m.n_components;
  b.largest_cluster = m.largest_cluster_size;
  b.char_path_length = m.char_path_length;
  b.path_length_on_largest_component = m.path_length_on_largest_component;
  b.global_efficiency = m.global_efficiency;
  b.intensity_largest_cluster = m.intensity_largest_cluster;
  b.modularity_zones = m.modularity_zones;
  b.modularity_detected = m.modularity_detected;
  if (m.communities) {
    std::vector<std::vector<std::string>> groups;
    for (const auto& members : m.communities->members()) {
      std::vector<std::string> ids;
      for (auto v : members) ids.push_back(g.nodes()[v]);
      std::sort(ids.begin(), ids.end());
      groups.push_back(std::move(ids));
    }
    std::sort(groups.begin(), groups.end());
    b.communities = std::move(groups);
  }
  return b;
}

inline MstSummary mst_summary(const Tree& tree, const HubReport& hub, const ZonePartition& zones) {
  MstSummary s;
  s.hub = hub.hub;
  s.hub_degree = hub.degree;
  s.avg_tree_length = average_tree_length(tree);
  s.modularity_zones = tree_modularity(tree, zones);
  for (const auto& e : detail::sorted_edges(tree.nodes, tree.edges)) {
    s.edges.push_back({tree.nodes[e.u], tree.nodes[e.v], e.weight});
  }
  s.hops = hub.hops;
  return s;
}

/// KS comparison of the geographic and network distances of the fitted
/// points, each scaled to [0, 1] by its own maximum.
inline KsResult scaling_ks(const std::vector<ScalingPoint>& points) {
  std::vector<double> geo, hops;
  double max_geo = 0.0, max_hops = 0.0;
  for (const auto& p : points) {
    if (!p.in_fit) continue;
    max_geo = std::max(max_geo, p.geo_km);
    max_hops = std::max(max_hops, static_cast<double>(p.hops));
  }
  for (const auto& p : points) {
    if (!p.in_fit) continue;
    geo.push_back(p.geo_km / max_geo);
    hops.push_back(static_cast<double>(p.hops) / max_hops);
  }
  return ks_two_sample(geo, hops);
}

inline ScalingSummary scaling_summary(const std::vector<ScalingPoint>& points) {
  ScalingSummary s;
  s.fit = power_law_fit(points);
  s.n_excluded = static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.in_fit; }));
  s.ks = scaling_ks(points);
  return s;
}

inline std::string k_label(double k) { return format_short(k); }

struct PipelineResult {
  Report report;
  // Output files keyed by path relative to the output directory.
  std::map<std::string, std::string> files;
};

inline PipelineResult compute_pipeline(const RunConfig& config) {
  validate(config);
  const std::string prices_text = read_file(config.prices_path);
  const std::string zones_text = config.zones_path.empty() ? std::string() : read_file(config.zones_path);
  const std::string coords_text = config.coords_path.empty() ? std::string() : read_file(config.coords_path);

  const PricePanel aligned = align_panel(load_prices(prices_text), config.max_fill);
  const ZonePartition zones = config.zones_path.empty() ? ZonePartition{} : load_zones(zones_text);
  const CoordinateTable coords = config.coords_path.empty() ? CoordinateTable{} : load_coordinates(coords_text);
  require_zones(zones, aligned.index_ids);
  for (const auto& id : aligned.index_ids) {
    if (!coords.contains(id)) fail(ErrorCode::MissingCoordinate, "no coordinates for index " + id);
  }
  if (config.hub_override && std::find(aligned.index_ids.begin(), aligned.index_ids.end(), *config.hub_override) ==
                                 aligned.index_ids.end()) {
    fail(ErrorCode::UnknownOverrideId, *config.hub_override + " is not in the price panel");
  }

  PipelineResult result;
  Report& report = result.report;
  report.version = std::string(kVersion);
  report.config_hash = fnv1a_hex(config_to_json(config, false).dump());
  report.input_hash = fnv1a_hex(prices_text + '\0' + zones_text + '\0' + coords_text);

  for (const auto& period : config.periods) {
    const std::string dir = period.name + "/";
    try {
      const WindowAnalysis w = analyze_window(aligned, period);
      PeriodReport pr;
      pr.name = period.name;
      pr.start = period.start.iso();
      pr.end = period.end.iso();
      pr.n_dates = w.prices.n_dates();

      const auto vol = volatility(w.raw);
      std::vector<VolatilitySeries> smoothed;
      for (const auto& s : vol) smoothed.push_back(lowess_smooth(s, config.lowess_span));
      pr.moments = {w.moments.mean, w.moments.std,     w.moments.skewness,
                    w.moments.kurtosis, w.moments.n_pairs, mean_volatility(vol)};

      for (double k : config.k_values) {
        try {
          const double theta = threshold_from_k(w.moments, k);
          const Graph g = build_threshold_network(w.corr, theta);
          pr.networks.push_back(network_block(g, graph_metrics(g, zones), k, theta));
          result.files[dir + "tn_k" + k_label(k) + ".dot"] = export_dot(g, zones);
          result.files[dir + "tn_k" + k_label(k) + ".graphml"] = export_graphml(g, zones);
        } catch (const Error& e) {
          throw e.with_context("k=" + k_label(k));
        }
      }

      const Tree tree = build_mst(w.dist);
      const HubReport hub = hub_node(tree, config.hub_override);
      pr.mst = mst_summary(tree, hub, zones);
      const auto points = scaling_points(hub, coords);
      pr.scaling = scaling_summary(points);

      result.files[dir + "mst.dot"] = export_dot(tree, zones, hub);
      result.files[dir + "mst.graphml"] = export_graphml(tree, zones, hub);
      result.files[dir + "volatility.csv"] = export_volatility_csv(vol, smoothed);
      result.files[dir + "scaling.csv"] = export_scaling_csv(points);
      result.files[dir + "scaling.json"] = json(pr.scaling).dump(2) + "\n";
      result.files[dir + "corr.csv"] = export_matrix_csv(w.corr);
      result.files[dir + "dist.csv"] = export_matrix_csv(w.dist);
      result.files[dir + "report.json"] = json(pr).dump(2) + "\n";
      report.periods.push_back(std::move(pr));
    } catch (const Error& e) {
      throw e.with_context("period '" + period.name + "'");
    }
  }
  result.files["report.json"] = export_json_report(report);
  return result;
}

/// Writes every file to `<name>.tmp` first and renames only once all writes
/// succeeded; on failure the temporaries are removed.
inline void write_outputs(const std::filesystem::path& dir, const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ec);
  };
  try {
    for (const auto& [name, content] : files) {
      const fs::path target = dir / name;
      fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += ".tmp";
      staged.emplace_back(tmp, target);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    }
    for (const auto& [tmp, target] : staged) fs::rename(tmp, target);
  } catch (const fs::filesystem_error& e) {
    cleanup();
    fail(ErrorCode::Io, e.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

inline Report run_pipeline(const RunConfig& config) {
  auto result = compute_pipeline(config);
  write_outputs(config.output_dir, result.files);
  return std::move(result.report);
}

}  // namespace corrnet
