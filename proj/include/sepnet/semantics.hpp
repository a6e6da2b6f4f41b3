#pragma once

// Ceteris-paribus order semantics over a net document: flips, dominance,
// the forward sweep for optimal outcomes, and the explicit induced preorder.
//
// Orientation: an edge from -> to means `from` is at least as good as `to`.
// "alpha dominates beta" is written alpha > beta and means a chain of flips
// leads from alpha to beta but none leads back.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sepnet/model.hpp"

namespace sepnet {

enum class FlipKind { Worsening, Indifferent };

inline std::string_view to_string(FlipKind k) { return k == FlipKind::Worsening ? "worsening" : "indifferent"; }

/// A single-variable change. Worsening: `to` is strictly worse. Indifferent:
/// both values share a stratum, so the reverse edge exists too.
struct FlipEdge {
  Outcome from;
  Outcome to;
  std::size_t variable = 0;
  FlipKind kind = FlipKind::Worsening;

  friend bool operator==(const FlipEdge&, const FlipEdge&) = default;
};

enum class Relation { Dominates, DominatedBy, Equivalent, Incomparable };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Dominates: return "DOMINATES";
    case Relation::DominatedBy: return "DOMINATED_BY";
    case Relation::Equivalent: return "EQUIVALENT";
    case Relation::Incomparable: return "INCOMPARABLE";
  }
  return "?";
}

struct DominanceResult {
  Relation relation = Relation::Incomparable;
  /// Shortest chain from the better outcome to the worse one. For Equivalent
  /// it runs alpha -> beta; empty when alpha == beta or the pair is Incomparable.
  std::vector<FlipEdge> witness;
};

/// Edge of a materialized preorder, by node index.
struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t variable = 0;
  FlipKind kind = FlipKind::Worsening;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Explicit induced order. Nodes are sorted; `components` partitions node
/// indices into weakly connected components, ordered by smallest member.
struct PreorderGraph {
  std::vector<Outcome> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::string> component_labels;

  std::size_t component_of(std::size_t node) const {
    for (std::size_t c = 0; c < components.size(); ++c)
      if (std::find(components[c].begin(), components[c].end(), node) != components[c].end()) return c;
    return components.size();
  }
};

struct ConsistencyResult {
  bool consistent = true;
  /// A closed chain containing at least one worsening flip, when inconsistent.
  std::vector<FlipEdge> cycle;
};

struct SearchOptions {
  std::size_t cap = kDefaultCap;
  /// Values enumerated for evaluation variables (materializing operations only).
  EvalGrid grid;
};

struct OptimalOptions {
  /// Break ties by declaration order instead of throwing AmbiguousTop.
  bool tie_break = false;
};

struct OutcomeHash {
  std::size_t operator()(const Outcome& o) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& v : o.values) {
      std::size_t x = std::visit([](auto a) { return std::hash<decltype(a)>{}(a); }, v);
      h = (h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2))) * 1099511628211ull;
    }
    return h;
  }
};

namespace semantics_detail {

/// Index-based view of the cp-tables of a net for fast statement lookup.
class CompiledNet {
 public:
  explicit CompiledNet(const NetDocument& net) : net_(net) {
    const std::size_t n = net.variables.size();
    parents_ = parent_indices(net);
    radix_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (auto p : parents_[i]) radix_[i].push_back(context_labels(net.variables[p]).size());
    ranks_.resize(n);
    lookup_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& var = net.variables[i];
      if (var.var_class != VarClass::Preference || parents_[i].size() != var.parents.size()) continue;
      const auto* table = net.cp_table(var.name);
      if (!table) continue;
      for (const auto& st : *table) {
        auto key = key_of_labels(i, st.context);
        if (!key || lookup_[i].count(*key)) continue;
        std::vector<int> rank(var.labels.size(), -1);
        for (std::size_t s = 0; s < st.strata.size(); ++s)
          for (const auto& v : st.strata[s])
            if (auto idx = var.label_index(v); idx && rank[*idx] < 0) rank[*idx] = static_cast<int>(s);
        lookup_[i].emplace(*key, ranks_[i].size());
        ranks_[i].push_back(std::move(rank));
        contexts_[i].push_back(st.context);
      }
    }
  }

  const NetDocument& net() const { return net_; }
  const std::vector<std::size_t>& parents(std::size_t var) const { return parents_[var]; }

  /// Stratum index per value (-1 when missing) for `var` in the context set by
  /// `o`, or nullptr when no statement applies.
  const std::vector<int>* ranks(std::size_t var, const Outcome& o) const {
    if (lookup_[var].empty()) return nullptr;
    auto key = key_of_outcome(var, o);
    if (!key) return nullptr;
    auto it = lookup_[var].find(*key);
    return it == lookup_[var].end() ? nullptr : &ranks_[var][it->second];
  }

  /// Context labels of `var` under `o` (bucket labels for evaluation parents).
  std::vector<std::string> context_of(std::size_t var, const Outcome& o) const {
    std::vector<std::string> ctx;
    for (auto p : parents_[var]) {
      const auto& pv = net_.variables[p];
      if (pv.discrete())
        ctx.push_back(pv.labels[o.label(p)]);
      else if (pv.buckets)
        ctx.emplace_back(kBucketLabels[bucket_of(o.number(p), *pv.buckets)]);
      else
        ctx.push_back(detail::format_number(o.number(p)));
    }
    return ctx;
  }

 private:
  std::optional<std::uint64_t> key_of_labels(std::size_t var, const std::vector<std::string>& ctx) const {
    if (ctx.size() != parents_[var].size()) return std::nullopt;
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      auto labels = context_labels(net_.variables[parents_[var][k]]);
      auto it = std::find(labels.begin(), labels.end(), ctx[k]);
      if (it == labels.end()) return std::nullopt;
      key = key * radix_[var][k] + static_cast<std::uint64_t>(it - labels.begin());
    }
    return key;
  }

  std::optional<std::uint64_t> key_of_outcome(std::size_t var, const Outcome& o) const {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < parents_[var].size(); ++k) {
      auto p = parents_[var][k];
      const auto& pv = net_.variables[p];
      std::size_t code;
      if (pv.discrete()) {
        code = o.label(p);
      } else {
        if (!pv.buckets) return std::nullopt;
        code = bucket_of(o.number(p), *pv.buckets);
      }
      key = key * radix_[var][k] + code;
    }
    return key;
  }

  const NetDocument& net_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> radix_;
  std::vector<std::vector<std::vector<int>>> ranks_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> lookup_;
  std::unordered_map<std::size_t, std::vector<std::vector<std::string>>> contexts_;
};

template <typename Visit>
void for_each_flip(const CompiledNet& cn, const Outcome& o, Visit&& visit) {
  const auto& net = cn.net();
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    const auto* rank = cn.ranks(i, o);
    if (!rank) continue;
    auto cur = o.label(i);
    int r = (*rank)[cur];
    if (r < 0) continue;
    for (std::size_t w = 0; w < rank->size(); ++w) {
      if (w == cur || (*rank)[w] < 0) continue;
      if ((*rank)[w] > r) visit(i, w, FlipKind::Worsening);
      else if ((*rank)[w] == r) visit(i, w, FlipKind::Indifferent);
    }
  }
}

inline Outcome with_value(const Outcome& o, std::size_t var, std::size_t label) {
  Outcome out = o;
  out.values[var] = label;
  return out;
}

/// Shortest flip chain from `from` to `to`, or nullopt when unreachable.
inline std::optional<std::vector<FlipEdge>> search(const CompiledNet& cn, const Outcome& from, const Outcome& to,
                                                   std::size_t cap) {
  struct Back {
    std::size_t prev;
    std::size_t variable;
    FlipKind kind;
  };
  std::vector<Outcome> nodes{from};
  std::vector<Back> back{{0, 0, FlipKind::Worsening}};
  std::unordered_map<Outcome, std::size_t, OutcomeHash> seen{{from, 0}};
  std::size_t head = 0;
  std::optional<std::size_t> hit;
  while (head < nodes.size() && !hit) {
    std::size_t cur = head++;
    const Outcome current = nodes[cur];
    for_each_flip(cn, current, [&](std::size_t var, std::size_t label, FlipKind kind) {
      if (hit) return;
      Outcome next = with_value(current, var, label);
      if (seen.count(next)) return;
      if (nodes.size() >= cap) throw CapExceeded(nodes.size() + 1, cap);
      seen.emplace(next, nodes.size());
      nodes.push_back(next);
      back.push_back({cur, var, kind});
      if (next == to) hit = nodes.size() - 1;
    });
  }
  if (!hit) return std::nullopt;
  std::vector<FlipEdge> chain;
  for (std::size_t at = *hit; at != 0; at = back[at].prev)
    chain.push_back({nodes[back[at].prev], nodes[at], back[at].variable, back[at].kind});
  std::reverse(chain.begin(), chain.end());
  return chain;
}

/// Value lists for materialization, honouring a fixed scenario assignment.
inline std::vector<std::vector<Value>> restricted_domains(const NetDocument& net, const Assignment& fixed,
                                                          const EvalGrid& grid) {
  for (const auto& [name, label] : fixed) {
    const auto* var = net.find(name);
    if (!var) throw InvalidOutcome("unknown variable '" + name + "' in fixed assignment");
    if (var->var_class != VarClass::Scenario)
      throw InvalidOutcome("only scenario variables can be fixed; '" + name + "' is " +
                           std::string(to_string(var->var_class)));
    if (!var->label_index(label)) throw InvalidOutcome("unknown value '" + label + "' for '" + name + "'");
  }
  std::vector<std::vector<Value>> domains;
  for (const auto& var : net.variables) {
    std::vector<Value> dom;
    if (auto it = fixed.find(var.name); it != fixed.end()) {
      dom.emplace_back(*var.label_index(it->second));
    } else if (var.discrete()) {
      for (std::size_t i = 0; i < var.labels.size(); ++i) dom.emplace_back(i);
    } else {
      dom = detail::grid_values(var, grid);
    }
    domains.push_back(std::move(dom));
  }
  return domains;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Components by smallest member; labels name the scenario when it is constant.
inline void assign_components(const NetDocument& net, PreorderGraph& g) {
  DisjointSets sets(g.nodes.size());
  for (const auto& e : g.edges) sets.unite(e.from, e.to);
  std::vector<std::size_t> slot(g.nodes.size(), g.nodes.size());
  g.components.clear();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    auto root = sets.find(i);
    if (slot[root] == g.nodes.size()) {
      slot[root] = g.components.size();
      g.components.emplace_back();
    }
    g.components[slot[root]].push_back(i);
  }
  g.component_labels.clear();
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    std::vector<std::string> parts;
    bool constant = true;
    for (std::size_t v = 0; v < net.variables.size() && constant; ++v) {
      if (net.variables[v].var_class != VarClass::Scenario) continue;
      const auto& first = g.nodes[g.components[c].front()].values[v];
      for (auto n : g.components[c])
        if (g.nodes[n].values[v] != first) constant = false;
      parts.push_back(net.variables[v].name + "=" + format_value(net.variables[v], first));
    }
    g.component_labels.push_back(constant && !parts.empty() ? detail::join(parts, ",")
                                                            : "component-" + std::to_string(c));
  }
}

}  // namespace semantics_detail

/// Every single-variable change out of `o` to a strictly worse value
/// (Worsening) or to a value in the same stratum (Indifferent). Variables
/// without an applicable statement, and missing values, produce no edge.
inline std::vector<FlipEdge> worsening_flips(const NetDocument& net, const Outcome& o) {
  check_outcome(net, o);
  semantics_detail::CompiledNet cn(net);
  std::vector<FlipEdge> out;
  semantics_detail::for_each_flip(cn, o, [&](std::size_t var, std::size_t label, FlipKind kind) {
    out.push_back({o, semantics_detail::with_value(o, var, label), var, kind});
  });
  return out;
}

/// Complete breadth-first dominance test. Both outcomes must belong to `net`.
inline DominanceResult dominates(const NetDocument& net, const Outcome& alpha, const Outcome& beta,
                                 std::size_t cap = kDefaultCap) {
  check_outcome(net, alpha);
  check_outcome(net, beta);
  if (alpha == beta) return {Relation::Equivalent, {}};
  semantics_detail::CompiledNet cn(net);
  auto forward = semantics_detail::search(cn, alpha, beta, cap);
  auto backward = semantics_detail::search(cn, beta, alpha, cap);
  if (forward && backward) return {Relation::Equivalent, std::move(*forward)};
  if (forward) return {Relation::Dominates, std::move(*forward)};
  if (backward) return {Relation::DominatedBy, std::move(*backward)};
  return {Relation::Incomparable, {}};
}

/// Forward sweep in topological order assigning each preference variable its
/// best value under the already-chosen parents. Every scenario variable must
/// be fixed; nets with evaluation variables go through sep_optimal instead.
inline Outcome optimal_outcome(const NetDocument& net, const Assignment& fixed, const OptimalOptions& opts = {}) {
  for (const auto& var : net.variables) {
    if (var.var_class == VarClass::Evaluation)
      throw InvalidOutcome("net has evaluation variable '" + var.name + "'; use sep_optimal");
    if (var.var_class == VarClass::Scenario && !fixed.count(var.name))
      throw InvalidOutcome("scenario variable '" + var.name + "' must be fixed");
  }
  auto order = topological_order(net);
  if (!order) throw CyclicDependency("optimal outcome needs an acyclic dependency graph");
  auto domains = semantics_detail::restricted_domains(net, fixed, {});
  semantics_detail::CompiledNet cn(net);

  Outcome o;
  o.values.assign(net.variables.size(), Value{std::size_t{0}});
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    if (net.variables[i].var_class == VarClass::Scenario) o.values[i] = domains[i].front();

  for (auto i : *order) {
    const auto& var = net.variables[i];
    if (var.var_class != VarClass::Preference) continue;
    if (var.labels.empty()) throw InvalidOutcome("'" + var.name + "' has an empty domain");
    const auto* rank = cn.ranks(i, o);
    std::vector<std::size_t> tied;
    if (!rank) {
      for (std::size_t v = 0; v < var.labels.size(); ++v) tied.push_back(v);
    } else {
      for (std::size_t v = 0; v < rank->size(); ++v)
        if ((*rank)[v] == 0) tied.push_back(v);
      if (tied.empty())
        for (std::size_t v = 0; v < var.labels.size(); ++v) tied.push_back(v);
    }
    if (tied.size() > 1 && !opts.tie_break) {
      std::vector<std::string> names;
      for (auto v : tied) names.push_back(var.labels[v]);
      throw AmbiguousTop(var.name, cn.context_of(i, o), std::move(names));
    }
    o.values[i] = tied.front();
  }
  return o;
}

/// Materializes the induced order over all outcomes consistent with `fixed`.
inline PreorderGraph induced_preorder(const NetDocument& net, const Assignment& fixed = {},
                                      const SearchOptions& opts = {}) {
  auto domains = semantics_detail::restricted_domains(net, fixed, opts.grid);
  PreorderGraph g;
  g.nodes = detail::enumerate_product(domains, opts.cap);
  std::unordered_map<Outcome, std::size_t, OutcomeHash> index;
  index.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], i);

  semantics_detail::CompiledNet cn(net);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    semantics_detail::for_each_flip(cn, g.nodes[i], [&](std::size_t var, std::size_t label, FlipKind kind) {
      auto it = index.find(semantics_detail::with_value(g.nodes[i], var, label));
      if (it != index.end()) g.edges.push_back({i, it->second, var, kind});
    });
  }
  semantics_detail::assign_components(net, g);
  return g;
}

/// True iff no cycle of the induced graph contains a worsening flip.
inline ConsistencyResult is_consistent(const NetDocument& net, const SearchOptions& opts = {}) {
  auto g = induced_preorder(net, {}, opts);
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) out[g.edges[e].from].push_back(e);

  // Tarjan's strongly connected components, iterative.
  std::vector<std::size_t> index(n, n), low(n, 0), comp(n, n);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, ncomp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != n) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, k] = frames.back();
      if (k < out[v].size()) {
        auto w = g.edges[out[v][k++]].to;
        if (index[w] == n) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        std::size_t done = v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        if (low[done] == index[done]) {
          for (;;) {
            auto w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = ncomp;
            if (w == done) break;
          }
          ++ncomp;
        }
      }
    }
  }

  for (const auto& bad : g.edges) {
    if (bad.kind != FlipKind::Worsening || comp[bad.from] != comp[bad.to]) continue;
    // Close the cycle with a shortest path back inside the component.
    std::vector<std::size_t> prev_edge(n, g.edges.size());
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{bad.to};
    seen[bad.to] = true;
    while (!queue.empty() && !seen[bad.from]) {
      auto v = queue.front();
      queue.pop_front();
      for (auto e : out[v]) {
        auto w = g.edges[e].to;
        if (seen[w] || comp[w] != comp[bad.from]) continue;
        seen[w] = true;
        prev_edge[w] = e;
        queue.push_back(w);
      }
    }
    ConsistencyResult res{false, {}};
    std::vector<std::size_t> path;
    for (auto at = bad.from; at != bad.to; at = g.edges[prev_edge[at]].from) path.push_back(prev_edge[at]);
    auto to_flip = [&](const GraphEdge& e) { return FlipEdge{g.nodes[e.from], g.nodes[e.to], e.variable, e.kind}; };
    res.cycle.push_back(to_flip(bad));
    for (auto it = path.rbegin(); it != path.rend(); ++it) res.cycle.push_back(to_flip(g.edges[*it]));
    return res;
  }
  return {};
}

}  // namespace sepnet
