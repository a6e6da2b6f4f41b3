#pragma once

// Text exports of a PreorderGraph: DOT, flat edge CSV and JSON lines.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "sepnet/model.hpp"
#include "sepnet/semantics.hpp"

namespace sepnet {

namespace export_detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Indifferent flips come in symmetric pairs; keep the one with from < to.
inline bool is_reverse_duplicate(const GraphEdge& e) { return e.kind == FlipKind::Indifferent && e.from > e.to; }

}  // namespace export_detail

/// One digraph per component. Worsening edges point from better to worse;
/// indifferent pairs are drawn once with dir=both.
inline std::string to_dot(const NetDocument& net, const PreorderGraph& g) {
  std::ostringstream out;
  std::vector<std::size_t> comp_of(g.nodes.size(), 0);
  for (std::size_t c = 0; c < g.components.size(); ++c)
    for (auto n : g.components[c]) comp_of[n] = c;
  std::vector<std::vector<const GraphEdge*>> edges(g.components.size());
  for (const auto& e : g.edges)
    if (!export_detail::is_reverse_duplicate(e)) edges[comp_of[e.from]].push_back(&e);

  for (std::size_t c = 0; c < g.components.size(); ++c) {
    const auto& label = c < g.component_labels.size() ? g.component_labels[c] : "component-" + std::to_string(c);
    out << "digraph " << export_detail::dot_quote(label) << " {\n";
    out << "  rankdir=TB;\n";
    for (auto n : g.components[c])
      out << "  n" << n << " [label=" << export_detail::dot_quote(format_outcome(net, g.nodes[n])) << "];\n";
    for (const auto* e : edges[c]) {
      out << "  n" << e->from << " -> n" << e->to << " [label="
          << export_detail::dot_quote(net.variables[e->variable].name);
      if (e->kind == FlipKind::Indifferent) out << ", dir=both, style=dashed";
      out << "];\n";
    }
    out << "}\n";
  }
  return out.str();
}

/// `from,to,variable,kind`, one row per directed flip. Outcomes are written
/// as comma-joined values, so those fields are quoted.
inline std::string to_edge_csv(const NetDocument& net, const PreorderGraph& g) {
  std::string out = "from,to,variable,kind\n";
  for (const auto& e : g.edges) {
    out += detail::csv_field(format_outcome(net, g.nodes[e.from])) + ",";
    out += detail::csv_field(format_outcome(net, g.nodes[e.to])) + ",";
    out += detail::csv_field(net.variables[e.variable].name) + ",";
    out += std::string(to_string(e.kind)) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json outcome_json(const NetDocument& net, const Outcome& o) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    if (net.variables[i].discrete())
      obj[net.variables[i].name] = net.variables[i].labels[o.label(i)];
    else
      obj[net.variables[i].name] = o.number(i);
  }
  return obj;
}

/// One JSON object per line: components, then nodes, then edges.
inline std::string to_json_lines(const NetDocument& net, const PreorderGraph& g) {
  std::string out;
  std::vector<std::size_t> comp_of(g.nodes.size(), 0);
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    for (auto n : g.components[c]) comp_of[n] = c;
    nlohmann::ordered_json line{{"type", "component"},
                                {"id", c},
                                {"label", c < g.component_labels.size() ? g.component_labels[c] : ""},
                                {"size", g.components[c].size()}};
    out += line.dump() + "\n";
  }
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    nlohmann::ordered_json line{
        {"type", "node"}, {"id", n}, {"component", comp_of[n]}, {"outcome", outcome_json(net, g.nodes[n])}};
    out += line.dump() + "\n";
  }
  for (const auto& e : g.edges) {
    nlohmann::ordered_json line{{"type", "edge"},
                                {"from", e.from},
                                {"to", e.to},
                                {"variable", net.variables[e.variable].name},
                                {"kind", to_string(e.kind)}};
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace sepnet
