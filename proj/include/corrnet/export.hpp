#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "corrnet/correlation.hpp"
#include "corrnet/geo_scaling.hpp"
#include "corrnet/mst.hpp"
#include "corrnet/returns_volatility.hpp"
#include "corrnet/threshold_network.hpp"

namespace corrnet {

/// printf-style `%.<digits>f`.
inline std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Shortest round-trip representation ("0", "1.5", "-2").
inline std::string format_short(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Node positions in id order.
inline std::vector<std::size_t> sorted_positions(const std::vector<std::string>& ids) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
  return order;
}

/// Edges with endpoints swapped so the smaller id comes first, sorted by id pair.
inline std::vector<Edge> sorted_edges(const std::vector<std::string>& ids, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (ids[e.v] < ids[e.u]) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
    if (ids[a.u] != ids[b.u]) return ids[a.u] < ids[b.u];
    return ids[a.v] < ids[b.v];
  });
  return edges;
}

inline std::string graphml_header() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
}

}  // namespace detail

/// Threshold network as DOT: nodes sorted by id with a `zone` attribute,
/// edges carry `weight` (the correlation) at 6 decimals.
inline std::string export_dot(const Graph& g, const ZonePartition& zones) {
  require_zones(zones, g.nodes());
  const auto& ids = g.nodes();
  std::ostringstream out;
  out << "graph G {\n";
  for (auto v : detail::sorted_positions(ids)) {
    out << "  " << detail::dot_quote(ids[v]) << " [zone=" << detail::dot_quote(zones.at(ids[v])) << "];\n";
  }
  for (const auto& e : detail::sorted_edges(ids, g.edges())) {
    out << "  " << detail::dot_quote(ids[e.u]) << " -- " << detail::dot_quote(ids[e.v])
        << " [weight=" << format_fixed(e.weight, 6) << "];\n";
  }
  out << "}\n";
  return out.str();
}

/// Spanning tree as DOT with `zone` and `hops_from_hub` on nodes and
/// `distance` on edges.
inline std::string export_dot(const Tree& t, const ZonePartition& zones, const HubReport& hub) {
  require_zones(zones, t.nodes);
  std::ostringstream out;
  out << "graph MST {\n";
  for (auto v : detail::sorted_positions(t.nodes)) {
    const auto& id = t.nodes[v];
    out << "  " << detail::dot_quote(id) << " [zone=" << detail::dot_quote(zones.at(id))
        << ", hops_from_hub=" << hub.hops.at(id) << "];\n";
  }
  for (const auto& e : detail::sorted_edges(t.nodes, t.edges)) {
    out << "  " << detail::dot_quote(t.nodes[e.u]) << " -- " << detail::dot_quote(t.nodes[e.v])
        << " [distance=" << format_fixed(e.weight, 6) << "];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_graphml(const Graph& g, const ZonePartition& zones) {
  require_zones(zones, g.nodes());
  const auto& ids = g.nodes();
  std::ostringstream out;
  out << detail::graphml_header();
  out << "  <key id=\"zone\" for=\"node\" attr.name=\"zone\" attr.type=\"string\"/>\n";
  out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (auto v : detail::sorted_positions(ids)) {
    out << "    <node id=\"" << detail::xml_escape(ids[v]) << "\"><data key=\"zone\">"
        << detail::xml_escape(zones.at(ids[v])) << "</data></node>\n";
  }
  for (const auto& e : detail::sorted_edges(ids, g.edges())) {
    out << "    <edge source=\"" << detail::xml_escape(ids[e.u]) << "\" target=\"" << detail::xml_escape(ids[e.v])
        << "\"><data key=\"weight\">" << format_fixed(e.weight, 6) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

inline std::string export_graphml(const Tree& t, const ZonePartition& zones, const HubReport& hub) {
  require_zones(zones, t.nodes);
  std::ostringstream out;
  out << detail::graphml_header();
  out << "  <key id=\"zone\" for=\"node\" attr.name=\"zone\" attr.type=\"string\"/>\n";
  out << "  <key id=\"hops_from_hub\" for=\"node\" attr.name=\"hops_from_hub\" attr.type=\"int\"/>\n";
  out << "  <key id=\"distance\" for=\"edge\" attr.name=\"distance\" attr.type=\"double\"/>\n";
  out << "  <graph id=\"MST\" edgedefault=\"undirected\">\n";
  for (auto v : detail::sorted_positions(t.nodes)) {
    const auto& id = t.nodes[v];
    out << "    <node id=\"" << detail::xml_escape(id) << "\"><data key=\"zone\">" << detail::xml_escape(zones.at(id))
        << "</data><data key=\"hops_from_hub\">" << hub.hops.at(id) << "</data></node>\n";
  }
  for (const auto& e : detail::sorted_edges(t.nodes, t.edges)) {
    out << "    <edge source=\"" << detail::xml_escape(t.nodes[e.u]) << "\" target=\""
        << detail::xml_escape(t.nodes[e.v]) << "\"><data key=\"distance\">" << format_fixed(e.weight, 6)
        << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

/// Square matrix with an id header row and id first column, 17 significant digits.
inline std::string export_matrix_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& values) {
  std::ostringstream out;
  out << "index";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << ',' << format_full(values(i, j));
    out << '\n';
  }
  return out.str();
}

inline std::string export_matrix_csv(const CorrMatrix& cm) { return export_matrix_csv(cm.index_ids, cm.values); }
inline std::string export_matrix_csv(const DistMatrix& dm) { return export_matrix_csv(dm.index_ids, dm.values); }

/// `date,index,raw,smoothed`, grouped by index in input order.
inline std::string export_volatility_csv(const std::vector<VolatilitySeries>& raw,
                                         const std::vector<VolatilitySeries>& smoothed) {
  std::ostringstream out;
  out << "date,index,raw,smoothed\n";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t t = 0; t < raw[i].values.size(); ++t) {
      out << raw[i].dates[t].iso() << ',' << raw[i].index_id << ',' << format_full(raw[i].values[t]) << ','
          << format_full(smoothed[i].values[t]) << '\n';
    }
  }
  return out.str();
}

inline std::string export_scaling_csv(const std::vector<ScalingPoint>& points) {
  std::ostringstream out;
  out << "index,geo_km,hops,in_fit\n";
  for (const auto& p : points) {
    out << p.index_id << ',' << format_full(p.geo_km) << ',' << p.hops << ',' << (p.in_fit ? "true" : "false") << '\n';
  }
  return out.str();
}

/// `date,<id1>,...` with missing cells left empty.
inline std::string export_prices_csv(const PricePanel& panel) {
  std::ostringstream out;
  out << "date";
  for (const auto& id : panel.index_ids) out << ',' << id;
  out << '\n';
  for (std::size_t t = 0; t < panel.n_dates(); ++t) {
    out << panel.dates[t].iso();
    for (std::size_t i = 0; i < panel.n_indices(); ++i) {
      const double p = panel.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
      out << ',';
      if (!is_missing(p)) out << format_full(p);
    }
    out << '\n';
  }
  return out.str();
}

inline std::string export_zones_csv(const ZonePartition& zones) {
  std::ostringstream out;
  out << "index,zone\n";
  for (const auto& [id, zone] : zones) out << id << ',' << zone << '\n';
  return out.str();
}

inline std::string export_coordinates_csv(const CoordinateTable& table) {
  std::ostringstream out;
  out << "index,city,lat,lon\n";
  for (const auto& [id, loc] : table) {
    out << id << ',' << loc.city << ',' << format_short(loc.position.lat) << ',' << format_short(loc.position.lon) << '\n';
  }
  return out.str();
}

}  // namespace corrnet
