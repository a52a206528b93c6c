// corrnet command-line front end.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrnet/corrnet.hpp"

namespace {

using corrnet::ErrorCode;
using corrnet::fail;
using corrnet::json;

constexpr const char* kConfigHelp = R"(Run configuration (JSON object; relative paths resolve against the file's directory):
  prices       price CSV, header `date,<id1>,...,<idN>` (required)
  coords       coordinates CSV `index,city,lat,lon` (required for the scaling stage)
  zones        zone CSV `index,zone` (required for modularity and exports)
  periods      [{"name", "start", "end"}], dates YYYY-MM-DD inclusive;
               default before 2006-06-02..2007-11-30, during 2007-12-03..2009-06-30,
               after 2009-07-01..2010-11-30
  k_values     threshold ladder theta = mean + k * std (default [0, 1, 2])
  max_fill     longest forward-filled gap in trading days (default 5)
  hub          MST hub id; null picks the highest-degree node (default null)
  lowess_span  LOWESS neighbourhood size (default 5)
  output_dir   output directory (default corrnet_out); --out overrides)";

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  corrnet::write_outputs(std::filesystem::path(path).parent_path(),
                         {{std::filesystem::path(path).filename().string(), text}});
}

std::optional<corrnet::Date> parse_date_option(const std::string& text, const char* name) {
  if (text.empty()) return std::nullopt;
  auto d = corrnet::Date::parse(text);
  if (!d) fail(ErrorCode::InvalidArgument, std::string(name) + " must be YYYY-MM-DD");
  return d;
}

// Options shared by the single-stage subcommands.
struct StageOptions {
  std::string prices;
  std::string start;
  std::string end;
  std::size_t max_fill = 5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--prices", prices, "Price CSV")->required();
    cmd->add_option("--start", start, "Window start date (inclusive)");
    cmd->add_option("--end", end, "Window end date (inclusive)");
    cmd->add_option("--max-fill", max_fill, "Longest forward-filled gap")->capture_default_str();
  }

  corrnet::WindowAnalysis analyze() const {
    const auto aligned = corrnet::align_panel(corrnet::load_prices(corrnet::read_file(prices)), max_fill);
    auto from = parse_date_option(start, "--start");
    auto to = parse_date_option(end, "--end");
    std::optional<corrnet::Period> period;
    if (from || to) {
      period = corrnet::Period{"window", from.value_or(aligned.dates.front()), to.value_or(aligned.dates.back())};
    }
    return corrnet::analyze_window(aligned, period);
  }
};

corrnet::ZonePartition load_zones_file(const std::string& path) {
  return corrnet::load_zones(corrnet::read_file(path));
}

int run_cli(int argc, char** argv) {
  CLI::App app{"corrnet: correlation networks of stock indices"};
  app.require_subcommand(1);
  app.footer(kConfigHelp);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted-block price panel");
  std::string spec_path, synth_out, zones_out;
  bool roster = false;
  std::uint64_t roster_seed = 2008;
  std::size_t roster_obs = 1500;
  synth->add_option("--spec", spec_path, "Block spec JSON (blocks, inter, n_obs, return_std, seed, start_date)");
  synth->add_flag("--roster", roster, "Use the built-in 17/13/5 roster spec instead of --spec");
  synth->add_option("--seed", roster_seed, "Seed for --roster")->capture_default_str();
  synth->add_option("--n-obs", roster_obs, "Observations for --roster")->capture_default_str();
  synth->add_option("--out", synth_out, "Output price CSV")->required();
  synth->add_option("--zones-out", zones_out, "Also write the block zones as `index,zone` CSV");

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline");
  std::string config_path, out_dir, prices, zones, coords, hub;
  std::vector<double> k_values;
  std::optional<std::size_t> max_fill, lowess_span;
  run->add_option("--config", config_path, "Run configuration JSON")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--prices", prices, "Overrides prices");
  run->add_option("--zones", zones, "Overrides zones");
  run->add_option("--coords", coords, "Overrides coords");
  run->add_option("--k", k_values, "Overrides k_values");
  run->add_option("--max-fill", max_fill, "Overrides max_fill");
  run->add_option("--hub", hub, "Overrides hub");
  run->add_option("--lowess-span", lowess_span, "Overrides lowess_span");

  // corr
  auto* corr = app.add_subcommand("corr", "Correlation matrix and its moments for one window");
  StageOptions corr_opts;
  std::string corr_out, dist_out;
  corr_opts.attach(corr);
  corr->add_option("--corr-out", corr_out, "Write the correlation matrix CSV");
  corr->add_option("--dist-out", dist_out, "Write the distance matrix CSV");

  // tn
  auto* tn = app.add_subcommand("tn", "Threshold network metrics for one window");
  StageOptions tn_opts;
  double tn_k = 0.0;
  std::optional<double> tn_theta;
  std::string tn_zones, tn_dot, tn_graphml;
  tn_opts.attach(tn);
  tn->add_option("--zones", tn_zones, "Zone CSV")->required();
  tn->add_option("--k", tn_k, "theta = mean + k * std")->capture_default_str();
  tn->add_option("--theta", tn_theta, "Absolute threshold (overrides --k)");
  tn->add_option("--dot-out", tn_dot, "Write the network as DOT");
  tn->add_option("--graphml-out", tn_graphml, "Write the network as GraphML");

  // mst
  auto* mst = app.add_subcommand("mst", "Minimal spanning tree for one window");
  StageOptions mst_opts;
  std::string mst_zones, mst_hub, mst_dot, mst_graphml;
  mst_opts.attach(mst);
  mst->add_option("--zones", mst_zones, "Zone CSV (needed for tree modularity and exports)");
  mst->add_option("--hub", mst_hub, "Pin the hub node");
  mst->add_option("--dot-out", mst_dot, "Write the tree as DOT (needs --zones)");
  mst->add_option("--graphml-out", mst_graphml, "Write the tree as GraphML (needs --zones)");

  // scaling
  auto* scaling = app.add_subcommand("scaling", "Hub distance scaling fit for one window");
  StageOptions sc_opts;
  std::string sc_coords, sc_hub, sc_csv;
  sc_opts.attach(scaling);
  scaling->add_option("--coords", sc_coords, "Coordinates CSV")->required();
  scaling->add_option("--hub", sc_hub, "Pin the hub node");
  scaling->add_option("--csv-out", sc_csv, "Write scaling points CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (synth->parsed()) {
    if (roster == !spec_path.empty()) fail(ErrorCode::InvalidArgument, "give exactly one of --spec and --roster");
    const auto spec = roster ? corrnet::roster_block_spec(roster_seed, roster_obs)
                             : corrnet::block_spec_from_json(json::parse(corrnet::read_file(spec_path)));
    write_text(synth_out, corrnet::export_prices_csv(corrnet::block_prices(spec)));
    if (!zones_out.empty()) write_text(zones_out, corrnet::export_zones_csv(corrnet::block_zones(spec)));
    return 0;
  }

  if (run->parsed()) {
    json j;
    try {
      j = json::parse(corrnet::read_file(config_path));
    } catch (const json::parse_error& e) {
      fail(ErrorCode::InvalidConfig, e.what());
    }
    auto config = corrnet::config_from_json(j, std::filesystem::path(config_path).parent_path());
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!prices.empty()) config.prices_path = prices;
    if (!zones.empty()) config.zones_path = zones;
    if (!coords.empty()) config.coords_path = coords;
    if (!k_values.empty()) config.k_values = k_values;
    if (max_fill) config.max_fill = *max_fill;
    if (!hub.empty()) config.hub_override = hub;
    if (lowess_span) config.lowess_span = *lowess_span;
    const auto report = corrnet::run_pipeline(config);
    std::cerr << "wrote " << report.periods.size() << " period(s) to " << config.output_dir.string() << "\n";
    return 0;
  }

  if (corr->parsed()) {
    const auto w = corr_opts.analyze();
    if (!corr_out.empty()) write_text(corr_out, corrnet::export_matrix_csv(w.corr));
    if (!dist_out.empty()) write_text(dist_out, corrnet::export_matrix_csv(w.dist));
    json out{{"mean", w.moments.mean},
             {"std", w.moments.std},
             {"skewness", corrnet::detail::optional_json(w.moments.skewness)},
             {"kurtosis", corrnet::detail::optional_json(w.moments.kurtosis)},
             {"n_pairs", w.moments.n_pairs},
             {"n_dates", w.prices.n_dates()}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (tn->parsed()) {
    const auto w = tn_opts.analyze();
    const auto zone_map = load_zones_file(tn_zones);
    const double theta = tn_theta.value_or(corrnet::threshold_from_k(w.moments, tn_k));
    const auto g = corrnet::build_threshold_network(w.corr, theta);
    const auto block = corrnet::network_block(g, corrnet::graph_metrics(g, zone_map), tn_theta ? 0.0 : tn_k, theta);
    if (!tn_dot.empty()) write_text(tn_dot, corrnet::export_dot(g, zone_map));
    if (!tn_graphml.empty()) write_text(tn_graphml, corrnet::export_graphml(g, zone_map));
    json out = block;
    if (tn_theta) out["k"] = nullptr;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (mst->parsed()) {
    const auto w = mst_opts.analyze();
    const auto tree = corrnet::build_mst(w.dist);
    const auto report = corrnet::hub_node(tree, mst_hub.empty() ? std::nullopt : std::optional(mst_hub));
    json out{{"hub", report.hub}, {"avg_tree_length", corrnet::average_tree_length(tree)}, {"hops", report.hops}};
    json edges = json::array();
    for (const auto& e : corrnet::detail::sorted_edges(tree.nodes, tree.edges)) {
      edges.push_back(json::array({tree.nodes[e.u], tree.nodes[e.v], e.weight}));
    }
    out["edges"] = edges;
    if (!mst_zones.empty()) {
      const auto zone_map = load_zones_file(mst_zones);
      out["modularity_zones"] = corrnet::tree_modularity(tree, zone_map);
      if (!mst_dot.empty()) write_text(mst_dot, corrnet::export_dot(tree, zone_map, report));
      if (!mst_graphml.empty()) write_text(mst_graphml, corrnet::export_graphml(tree, zone_map, report));
    } else if (!mst_dot.empty() || !mst_graphml.empty()) {
      fail(ErrorCode::InvalidArgument, "tree exports need --zones");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (scaling->parsed()) {
    const auto w = sc_opts.analyze();
    const auto table = corrnet::load_coordinates(corrnet::read_file(sc_coords));
    const auto tree = corrnet::build_mst(w.dist);
    const auto report = corrnet::hub_node(tree, sc_hub.empty() ? std::nullopt : std::optional(sc_hub));
    const auto points = corrnet::scaling_points(report, table);
    if (!sc_csv.empty()) write_text(sc_csv, corrnet::export_scaling_csv(points));
    json out = corrnet::scaling_summary(points);
    out["hub"] = report.hub;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const corrnet::Error& e) {
    std::cerr << "corrnet: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "corrnet: internal error: " << e.what() << "\n";
    return 2;
  }
}
