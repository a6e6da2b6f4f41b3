#pragma once

// SEP-net semantics: a scenario fixes S, the evaluation function fixes E, and
// what is left is an ordinary CP-net over P. Orders of different scenarios
// never touch, so the global order is a set of per-scenario components.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sepnet/model.hpp"
#include "sepnet/semantics.hpp"

namespace sepnet {

/// Complete assignment to the scenario variables.
using ScenarioAssignment = Assignment;

struct SepOutcome {
  ScenarioAssignment scenario;
  std::map<std::string, double> evaluations;
  std::map<std::string, std::string> preferences;

  friend bool operator==(const SepOutcome&, const SepOutcome&) = default;
};

/// A preference variable left without any statement after projection.
struct MissingStatement {
  std::string variable;
  /// Scenario and bucket labels of the non-preference parents, in parent order.
  std::vector<std::string> context;
};

struct Projection {
  NetDocument net;
  std::vector<MissingStatement> missing;
  /// Substituted scenario and bucket labels per preference variable.
  std::map<std::string, std::vector<std::string>> fixed_context;
};

struct SepOrderOptions {
  std::size_t cap = kDefaultCap;
  /// Add outcomes whose evaluations differ from the ef point. They are isolated.
  bool include_off_ef = false;
  /// Evaluation values tried for off-ef outcomes.
  EvalGrid grid;
};

namespace sep_detail {

inline void check_scenario(const NetDocument& net, const ScenarioAssignment& s) {
  for (const auto& [name, label] : s) {
    const auto* var = net.find(name);
    if (!var) throw InvalidOutcome("unknown variable '" + name + "' in scenario");
    if (var->var_class != VarClass::Scenario) throw InvalidOutcome("'" + name + "' is not a scenario variable");
    if (!var->label_index(label)) throw InvalidOutcome("unknown value '" + label + "' for '" + name + "'");
  }
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Scenario && !s.count(var.name))
      throw InvalidOutcome("scenario leaves '" + var.name + "' unassigned");
}

/// Context label of a non-preference parent under a scenario and ef values.
inline std::string context_label(const VariableSpec& parent, const ScenarioAssignment& s,
                                 const std::map<std::string, double>& evals) {
  if (parent.var_class == VarClass::Scenario) return s.at(parent.name);
  if (!parent.buckets) throw InvalidOutcome("'" + parent.name + "' is used as a parent but has no buckets");
  return std::string(kBucketLabels[bucket_of(evals.at(parent.name), *parent.buckets)]);
}

inline std::vector<std::size_t> scenario_key(const NetDocument& net, const ScenarioAssignment& s) {
  std::vector<std::size_t> key;
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Scenario) key.push_back(*var.label_index(s.at(var.name)));
  return key;
}

}  // namespace sep_detail

/// "X=a,Y=b" in declaration order of the scenario variables.
inline std::string scenario_label(const NetDocument& net, const ScenarioAssignment& s) {
  std::vector<std::string> parts;
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Scenario) parts.push_back(var.name + "=" + s.at(var.name));
  return detail::join(parts, ",");
}

/// Every scenario of `net`, in canonical order.
inline std::vector<ScenarioAssignment> all_scenarios(const NetDocument& net, std::size_t cap = kDefaultCap) {
  std::vector<std::vector<Value>> domains;
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    if (net.variables[i].var_class != VarClass::Scenario) continue;
    std::vector<Value> dom;
    for (std::size_t k = 0; k < net.variables[i].labels.size(); ++k) dom.emplace_back(k);
    domains.push_back(std::move(dom));
    vars.push_back(i);
  }
  std::vector<ScenarioAssignment> out;
  for (const auto& o : detail::enumerate_product(domains, cap)) {
    ScenarioAssignment s;
    for (std::size_t k = 0; k < vars.size(); ++k) s[net.variables[vars[k]].name] = net.variables[vars[k]].labels[o.label(k)];
    out.push_back(std::move(s));
  }
  return out;
}

/// Evaluation point of every evaluation variable under `scenario`, resolving
/// evaluation parents first.
inline std::map<std::string, double> apply_ef(const NetDocument& net, const ScenarioAssignment& scenario) {
  sep_detail::check_scenario(net, scenario);
  auto order = topological_order(net);
  if (!order) throw CyclicDependency("evaluation functions need an acyclic dependency graph");
  std::map<std::string, double> evals;
  for (auto i : *order) {
    const auto& var = net.variables[i];
    if (var.var_class != VarClass::Evaluation) continue;
    std::vector<std::string> ctx;
    for (const auto& p : var.parents) {
      const auto* parent = net.find(p);
      if (!parent || parent->var_class == VarClass::Preference)
        throw InvalidOutcome("'" + var.name + "' has parent '" + p + "' that is not a scenario or evaluation variable");
      ctx.push_back(sep_detail::context_label(*parent, scenario, evals));
    }
    auto ef = net.eval_functions.find(var.name);
    const EvalEntry* entry = ef == net.eval_functions.end() ? nullptr : ef->second.find(ctx);
    if (!entry) throw MissingEfEntry(var.name, ctx);
    if (!var.range.contains(entry->value))
      throw InvalidOutcome("evaluation of '" + var.name + "' is outside its range");
    evals[var.name] = entry->value;
  }
  return evals;
}

/// The CP-net over preference variables left once the scenario and ef points
/// are substituted into every context. Rows that disagree with them drop.
inline Projection project(const NetDocument& net, const ScenarioAssignment& scenario) {
  auto evals = apply_ef(net, scenario);
  Projection out;
  out.net.name = net.name;
  for (const auto& var : net.variables) {
    if (var.var_class != VarClass::Preference) continue;
    VariableSpec pv = var;
    pv.parents.clear();
    std::vector<std::size_t> fixed_pos, kept_pos;
    std::vector<std::string> fixed_ctx;
    for (std::size_t k = 0; k < var.parents.size(); ++k) {
      const auto* parent = net.find(var.parents[k]);
      if (!parent) throw InvalidOutcome("unknown parent '" + var.parents[k] + "'");
      if (parent->var_class == VarClass::Preference) {
        pv.parents.push_back(parent->name);
        kept_pos.push_back(k);
      } else {
        fixed_pos.push_back(k);
        fixed_ctx.push_back(sep_detail::context_label(*parent, scenario, evals));
      }
    }
    out.net.variables.push_back(pv);
    out.fixed_context[var.name] = fixed_ctx;

    std::vector<CpStatement> rows;
    if (const auto* table = net.cp_table(var.name)) {
      for (const auto& st : *table) {
        if (st.context.size() != var.parents.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < fixed_pos.size() && match; ++k) match = st.context[fixed_pos[k]] == fixed_ctx[k];
        if (!match) continue;
        CpStatement row;
        for (auto k : kept_pos) row.context.push_back(st.context[k]);
        row.strata = st.strata;
        row.annotation = st.annotation;
        rows.push_back(std::move(row));
      }
    }
    if (rows.empty())
      out.missing.push_back({var.name, fixed_ctx});
    else
      out.net.cp_tables[var.name] = std::move(rows);
  }
  return out;
}

/// Outcome of the full net corresponding to a SEP outcome.
inline Outcome to_outcome(const NetDocument& net, const SepOutcome& s) {
  Outcome o;
  for (const auto& var : net.variables) {
    switch (var.var_class) {
      case VarClass::Scenario: o.values.emplace_back(*var.label_index(s.scenario.at(var.name))); break;
      case VarClass::Evaluation: o.values.emplace_back(s.evaluations.at(var.name)); break;
      case VarClass::Preference: o.values.emplace_back(*var.label_index(s.preferences.at(var.name))); break;
    }
  }
  return o;
}

inline SepOutcome to_sep_outcome(const NetDocument& net, const Outcome& o) {
  SepOutcome s;
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    const auto& var = net.variables[i];
    switch (var.var_class) {
      case VarClass::Scenario: s.scenario[var.name] = var.labels[o.label(i)]; break;
      case VarClass::Evaluation: s.evaluations[var.name] = o.number(i); break;
      case VarClass::Preference: s.preferences[var.name] = var.labels[o.label(i)]; break;
    }
  }
  return s;
}

/// Best outcome for a scenario: ef points for E, then the forward sweep over
/// the projected preference net.
inline SepOutcome sep_optimal(const NetDocument& net, const ScenarioAssignment& scenario,
                              const OptimalOptions& opts = {}) {
  auto proj = project(net, scenario);
  Outcome top;
  try {
    top = optimal_outcome(proj.net, {}, opts);
  } catch (const AmbiguousTop& e) {
    auto ctx = proj.fixed_context.at(e.variable());
    ctx.insert(ctx.end(), e.context().begin(), e.context().end());
    throw AmbiguousTop(e.variable(), std::move(ctx), e.tied());
  }
  SepOutcome out;
  out.scenario = scenario;
  out.evaluations = apply_ef(net, scenario);
  for (std::size_t i = 0; i < proj.net.variables.size(); ++i)
    out.preferences[proj.net.variables[i].name] = proj.net.variables[i].labels[top.label(i)];
  return out;
}

/// Per-scenario induced orders over the full net's variables. Scenarios are
/// deduplicated and sorted by declaration index; component c holds the
/// outcomes of the c-th scenario. Off-ef outcomes, when requested, follow as
/// singleton components.
inline PreorderGraph sep_order(const NetDocument& net, std::vector<ScenarioAssignment> scenarios,
                               const SepOrderOptions& opts = {}) {
  for (const auto& s : scenarios) sep_detail::check_scenario(net, s);
  std::sort(scenarios.begin(), scenarios.end(), [&](const auto& a, const auto& b) {
    return sep_detail::scenario_key(net, a) < sep_detail::scenario_key(net, b);
  });
  scenarios.erase(std::unique(scenarios.begin(), scenarios.end()), scenarios.end());

  PreorderGraph g;
  std::vector<std::size_t> pref_index;
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    if (net.variables[i].var_class == VarClass::Preference) pref_index.push_back(i);

  struct OffEf {
    std::size_t node;
    std::string label;
  };
  std::vector<OffEf> off_ef;

  for (const auto& s : scenarios) {
    auto proj = project(net, s);
    auto evals = apply_ef(net, s);
    auto sub = induced_preorder(proj.net, {}, {opts.cap, {}});
    if (g.nodes.size() + sub.nodes.size() > opts.cap) throw CapExceeded(g.nodes.size() + sub.nodes.size(), opts.cap);

    auto lift = [&](const Outcome& p, const std::map<std::string, double>& ev) {
      SepOutcome so{s, ev, {}};
      for (std::size_t k = 0; k < pref_index.size(); ++k)
        so.preferences[net.variables[pref_index[k]].name] = proj.net.variables[k].labels[p.label(k)];
      return to_outcome(net, so);
    };

    const std::size_t base = g.nodes.size();
    std::vector<std::size_t> members;
    for (const auto& p : sub.nodes) {
      members.push_back(g.nodes.size());
      g.nodes.push_back(lift(p, evals));
    }
    for (const auto& e : sub.edges) g.edges.push_back({base + e.from, base + e.to, pref_index[e.variable], e.kind});
    g.components.push_back(std::move(members));
    g.component_labels.push_back(scenario_label(net, s));

    if (!opts.include_off_ef) continue;
    std::vector<std::vector<Value>> domains;
    std::vector<std::size_t> eval_index;
    for (std::size_t i = 0; i < net.variables.size(); ++i) {
      if (net.variables[i].var_class != VarClass::Evaluation) continue;
      domains.push_back(detail::grid_values(net.variables[i], opts.grid));
      eval_index.push_back(i);
    }
    if (eval_index.empty()) continue;
    auto points = detail::enumerate_product(domains, opts.cap);
    for (const auto& point : points) {
      std::map<std::string, double> ev;
      bool differs = false;
      for (std::size_t k = 0; k < eval_index.size(); ++k) {
        const auto& name = net.variables[eval_index[k]].name;
        ev[name] = point.number(k);
        differs = differs || ev[name] != evals.at(name);
      }
      if (!differs) continue;
      for (const auto& p : sub.nodes) {
        if (g.nodes.size() >= opts.cap) throw CapExceeded(g.nodes.size() + 1, opts.cap);
        off_ef.push_back({g.nodes.size(), scenario_label(net, s) + " off-ef"});
        g.nodes.push_back(lift(p, ev));
      }
    }
  }
  for (const auto& o : off_ef) {
    g.components.push_back({o.node});
    g.component_labels.push_back(o.label);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Flat records

/// `scenario.X,...,eval.Y,...,pref.Z,...` in declaration order within each group.
inline std::vector<std::string> sep_record_header(const NetDocument& net) {
  std::vector<std::string> cols;
  for (auto c : {VarClass::Scenario, VarClass::Evaluation, VarClass::Preference}) {
    const char* prefix = c == VarClass::Scenario ? "scenario." : c == VarClass::Evaluation ? "eval." : "pref.";
    for (const auto& var : net.variables)
      if (var.var_class == c) cols.push_back(prefix + var.name);
  }
  return cols;
}

inline std::vector<std::string> sep_record_row(const NetDocument& net, const SepOutcome& s) {
  std::vector<std::string> row;
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Scenario) row.push_back(s.scenario.at(var.name));
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Evaluation) row.push_back(detail::format_number(s.evaluations.at(var.name)));
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Preference) row.push_back(s.preferences.at(var.name));
  return row;
}

}  // namespace sepnet
