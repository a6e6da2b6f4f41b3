// sepnet: command-line front end.
//
// Exit codes: 0 success, 1 semantic failure (invalid or inconsistent input,
// ambiguous optimum, order effects), 2 input or usage error, 3 cap exceeded.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepnet/sepnet.hpp"

namespace fs = std::filesystem;
using namespace sepnet;

namespace {

enum Exit { kOk = 0, kSemantic = 1, kInput = 2, kCap = 3 };

struct UsageError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
/// A command that ran to completion but reports a negative result.
struct SemanticFailure : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw IoError("cannot write '" + path.string() + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file(out_path, content);
}

std::size_t effective_cap(std::size_t flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("SEPNET_CAP")) {
    auto v = detail::parse_integer(env);
    if (!v || *v <= 0) throw UsageError("SEPNET_CAP must be a positive integer");
    return static_cast<std::size_t>(*v);
  }
  return kDefaultCap;
}

Assignment parse_assignments(const std::vector<std::string>& items) {
  Assignment out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected NAME=VALUE, got '" + item + "'");
    if (!out.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw UsageError("'" + item.substr(0, eq) + "' given twice");
  }
  return out;
}

EvalGrid parse_grid(const std::vector<std::string>& items) {
  EvalGrid grid;
  for (const auto& [name, values] : parse_assignments(items)) {
    for (const auto& v : detail::split(values, ',')) {
      auto num = detail::parse_number(detail::trim(v));
      if (!num) throw UsageError("grid value '" + v + "' for '" + name + "' is not a number");
      grid[name].push_back(*num);
    }
  }
  return grid;
}

NetDocument load_net(const std::string& path) { return parse_net(read_file(path)); }

std::string format_flip(const NetDocument& net, const FlipEdge& e) {
  return format_outcome(net, e.from) + " -> " + format_outcome(net, e.to) + " " + net.variables[e.variable].name + " " +
         std::string(to_string(e.kind));
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path) {
  auto net = load_net(path);
  auto report = validate(net);
  for (const auto& f : report.violations) std::cout << "violation " << f.code << " " << f.variable << ": " << f.message << "\n";
  for (const auto& f : report.notes) std::cout << "note " << f.code << " " << f.variable << ": " << f.message << "\n";
  std::cout << (report.ok() ? "valid" : "invalid") << "\n";
  return report.ok() ? kOk : kSemantic;
}

void require_valid(const NetDocument& net) {
  auto report = validate(net);
  if (!report.ok()) {
    const auto& f = report.violations.front();
    throw SemanticFailure("net is invalid: " + f.code + ": " + f.message);
  }
}

int cmd_optimal(const std::string& path, const std::vector<std::string>& scenario, bool tie_break) {
  auto net = load_net(path);
  require_valid(net);
  if (net.count(VarClass::Evaluation)) throw UsageError("net has evaluation variables; use sep-optimal");
  auto fixed = parse_assignments(scenario);
  for (const auto& var : net.variables)
    if (var.var_class == VarClass::Scenario && !fixed.count(var.name))
      throw UsageError("scenario variable '" + var.name + "' needs --scenario " + var.name + "=VALUE");
  std::cout << format_outcome(net, optimal_outcome(net, fixed, {tie_break})) << "\n";
  return kOk;
}

int cmd_dominance(const std::string& path, const std::string& a, const std::string& b, std::size_t cap) {
  auto net = load_net(path);
  require_valid(net);
  auto res = dominates(net, parse_outcome(net, a), parse_outcome(net, b), cap);
  std::cout << to_string(res.relation) << "\n";
  for (const auto& e : res.witness) std::cout << format_flip(net, e) << "\n";
  return kOk;
}

std::string render(const NetDocument& net, const PreorderGraph& g, const std::string& format) {
  if (format == "dot") return to_dot(net, g);
  if (format == "csv") return to_edge_csv(net, g);
  if (format == "json-lines") return to_json_lines(net, g);
  throw UsageError("unknown format '" + format + "'");
}

int cmd_order(const std::string& path, const std::vector<std::string>& scenario, std::string format,
              std::string out, const std::string& dot_out, bool off_ef, const std::vector<std::string>& grid,
              std::size_t cap) {
  auto net = load_net(path);
  require_valid(net);
  if (!dot_out.empty()) {
    format = "dot";
    out = dot_out;
  }
  auto fixed = parse_assignments(scenario);
  PreorderGraph g;
  if (net.count(VarClass::Evaluation)) {
    std::vector<ScenarioAssignment> scenarios;
    for (auto& s : all_scenarios(net, cap)) {
      bool keep = true;
      for (const auto& [k, v] : fixed) keep = keep && s.count(k) && s.at(k) == v;
      if (keep) scenarios.push_back(std::move(s));
    }
    SepOrderOptions opts;
    opts.cap = cap;
    opts.include_off_ef = off_ef;
    opts.grid = parse_grid(grid);
    g = sep_order(net, scenarios, opts);
  } else {
    SearchOptions opts;
    opts.cap = cap;
    g = induced_preorder(net, fixed, opts);
  }
  emit(out, render(net, g, format));
  std::cerr << g.components.size() << " component(s), " << g.nodes.size() << " node(s), " << g.edges.size()
            << " edge(s)\n";
  return kOk;
}

int cmd_consistent(const std::string& path, std::size_t cap) {
  auto net = load_net(path);
  SearchOptions opts;
  opts.cap = cap;
  auto res = is_consistent(net, opts);
  std::cout << (res.consistent ? "consistent" : "inconsistent") << "\n";
  for (const auto& e : res.cycle) std::cout << format_flip(net, e) << "\n";
  return res.consistent ? kOk : kSemantic;
}

int cmd_sep_optimal(const std::string& path, const std::vector<std::string>& scenario, bool all, bool tie_break) {
  auto net = load_net(path);
  require_valid(net);
  std::vector<ScenarioAssignment> scenarios;
  if (all)
    scenarios = all_scenarios(net);
  else
    scenarios.push_back(parse_assignments(scenario));
  std::string out = detail::join(sep_record_header(net), ",") + "\n";
  int status = kOk;
  for (const auto& s : scenarios) {
    try {
      auto o = sep_optimal(net, s, {tie_break});
      std::vector<std::string> row;
      for (const auto& f : sep_record_row(net, o)) row.push_back(detail::csv_field(f));
      out += detail::join(row, ",") + "\n";
    } catch (const AmbiguousTop& e) {
      if (!all) throw;
      std::cerr << scenario_label(net, s) << ": " << e.what() << "\n";
      status = kSemantic;
    } catch (const MissingEfEntry& e) {
      if (!all) throw;
      std::cerr << scenario_label(net, s) << ": " << e.what() << "\n";
      status = kSemantic;
    }
  }
  std::cout << out;
  return status;
}

struct LearnArgs {
  std::string csv;
  std::string out;
  std::string report_dir = "report";
  std::string manifest;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string test = "auto";
  std::string rule = "any";
  std::string ef = "median";
  std::string quartiles = "tukey";
  bool raw_alpha = false;
  bool all_reason_pairs = false;
  bool pooled_nh4 = false;
  bool nh3_random = false;
  bool service_flags = false;
  bool force_pool = false;
  double delta = 0.1;
  std::size_t min_n = 5;
};

LearnConfig to_config(const LearnArgs& a) {
  LearnConfig c;
  c.alpha = a.alpha;
  c.seed = a.seed;
  c.jobs = a.jobs;
  c.test = a.test == "auto" ? TestChoice::Auto : a.test == "rank-sum" ? TestChoice::RankSum : TestChoice::SignedRank;
  c.rule = a.rule == "any" ? AggregationRule::AnyPair : AggregationRule::Majority;
  c.ef = a.ef == "median" ? EfEstimator::Median : EfEstimator::Mean;
  c.quartiles = a.quartiles == "tukey" ? QuartileMethod::Tukey : QuartileMethod::Linear;
  c.bonferroni = !a.raw_alpha;
  c.all_reason_pairs = a.all_reason_pairs;
  c.stratify_nh4 = !a.pooled_nh4;
  c.nh3_random = a.nh3_random;
  c.include_service_flags = a.service_flags;
  c.delta = a.delta;
  c.min_n = a.min_n;
  return c;
}

std::map<std::string, std::string> flag_map(const LearnArgs& a) {
  return {{"alpha", detail::format_number(a.alpha)},
          {"jobs", std::to_string(a.jobs)},
          {"test", a.test},
          {"rule", a.rule},
          {"ef", a.ef},
          {"quartiles", a.quartiles},
          {"raw_alpha", a.raw_alpha ? "true" : "false"},
          {"all_reason_pairs", a.all_reason_pairs ? "true" : "false"},
          {"pooled_nh4", a.pooled_nh4 ? "true" : "false"},
          {"nh3_random", a.nh3_random ? "true" : "false"},
          {"include_service_flags", a.service_flags ? "true" : "false"},
          {"force_pool", a.force_pool ? "true" : "false"},
          {"delta", detail::format_number(a.delta)},
          {"min_n", std::to_string(a.min_n)},
          {"report_dir", a.report_dir},
          {"out", a.out}};
}

std::vector<SurveyRecord> load_survey(const std::string& path) {
  try {
    return ingest(read_file(path));
  } catch (const IngestError& e) {
    for (const auto& d : e.diagnostics())
      std::cerr << path << ":" << d.line << ": " << (d.column.empty() ? "" : d.column + ": ") << d.message << "\n";
    throw;
  }
}

int cmd_learn(const LearnArgs& a) {
  const std::string text = read_file(a.csv);
  auto records = load_survey(a.csv);
  auto cfg = to_config(a);
  fs::path dir(a.report_dir);
  std::vector<std::string> outputs;
  auto put = [&](const fs::path& p, const std::string& content) {
    write_file(p, content);
    outputs.push_back(p.string());
  };

  auto screen = order_effect_screen(records, cfg.alpha, cfg.bonferroni);
  put(dir / "order_effects.csv", format_order_table(order_rows(screen)));
  put(dir / "order_tests.csv", format_order_details(screen));
  put(dir / "correlations.csv", format_correlations(survey_correlations(records)));

  RunManifest m;
  m.command = "learn";
  m.inputs.push_back({a.csv, text.size(), fnv1a_hex(text)});
  m.flags = flag_map(a);
  m.seed = a.seed;
  m.timestamp = utc_timestamp();
  const fs::path manifest_path = a.manifest.empty() ? dir / "manifest.json" : fs::path(a.manifest);

  if (!screen.pooled && !a.force_pool) {
    m.outputs = outputs;
    write_file(manifest_path, manifest_to_json(m));
    std::size_t n = 0;
    for (const auto& r : screen.rows) n += r.result.reject ? 1 : 0;
    throw SemanticFailure("question order changes the judgment for " + std::to_string(n) +
                          " reason(s); see order_effects.csv, or pass --force-pool");
  }

  auto res = infer_structure(records, cfg);
  put(dir / "location_evaluation.csv", format_location_eval_table(location_eval_rows(res.edges)));
  put(dir / "location_judgment.csv", format_location_judgment_table(location_judgment_rows(res.edges)));
  put(dir / "tests.csv", format_test_results(res.edges));
  put(dir / "edges.csv", format_edge_reports(res.edges));
  put(a.out.empty() ? dir / "learned.net" : fs::path(a.out), serialize_net(res.net));
  for (const auto& line : res.log) std::cerr << line << "\n";
  m.outputs = outputs;
  write_file(manifest_path, manifest_to_json(m));

  for (const auto& e : res.edges)
    if (e.edge_present) std::cout << e.source << " -> " << e.target << "\n";
  return kOk;
}

int cmd_screen(const std::string& path, double alpha, bool raw_alpha) {
  auto records = load_survey(path);
  auto screen = order_effect_screen(records, alpha, !raw_alpha);
  std::cout << format_order_table(order_rows(screen));
  for (const auto& s : screen.skipped) std::cerr << "skipped " << s << ": only one order condition\n";
  std::cerr << (screen.pooled ? "pooled: no order effect" : "not pooled: order effect detected") << "\n";
  return screen.pooled ? kOk : kSemantic;
}

int cmd_generate(const std::string& model, std::size_t subjects, std::uint64_t seed, const std::string& out,
                 double shift, double sd) {
  SyntheticModel m;
  if (model == "null")
    m = null_model();
  else if (model == "planted")
    m = planted_location_model(shift, sd);
  else if (model == "mimic")
    m = mimic_model();
  else
    throw UsageError("unknown model '" + model + "'");
  emit(out, to_csv(generate_survey(m, {subjects, seed})));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SEP-net reasoning and structure learning"};
  app.require_subcommand(1);
  std::size_t cap_flag = 0;
  app.add_option("--cap", cap_flag, "Node cap for enumeration and search (env SEPNET_CAP)");

  std::string net_path, a, b, format = "dot", out, dot_out, csv_path, model = "mimic";
  std::vector<std::string> scenario, grid;
  bool tie_break = false, all = false, off_ef = false, raw_alpha = false;
  double alpha = 0.05, shift = 30.0, sd = 15.0;
  std::size_t subjects = 100;
  std::uint64_t seed = 1;
  LearnArgs learn;

  auto* validate_cmd = app.add_subcommand("validate", "Check a net document");
  validate_cmd->add_option("net", net_path)->required();

  auto* optimal_cmd = app.add_subcommand("optimal", "Best outcome of a CP-net for a scenario");
  optimal_cmd->add_option("net", net_path)->required();
  optimal_cmd->add_option("--scenario,-s", scenario, "NAME=VALUE for each scenario variable");
  optimal_cmd->add_flag("--tie-break", tie_break, "Pick the first declared value among tied tops");

  auto* dom_cmd = app.add_subcommand("dominance", "Compare two outcomes");
  dom_cmd->add_option("net", net_path)->required();
  dom_cmd->add_option("a", a, "Outcome, e.g. a,o,c_bar or S=a,T=o,P=c_bar")->required();
  dom_cmd->add_option("b", b)->required();

  auto* order_cmd = app.add_subcommand("order", "Export the induced order");
  order_cmd->add_option("net", net_path)->required();
  order_cmd->add_option("--scenario,-s", scenario);
  order_cmd->add_option("--format", format)->check(CLI::IsMember({"dot", "csv", "json-lines"}));
  order_cmd->add_option("--out,-o", out);
  order_cmd->add_option("--dot", dot_out, "Write DOT to this file");
  order_cmd->add_flag("--off-ef", off_ef, "Add isolated outcomes with evaluations off the ef point");
  order_cmd->add_option("--grid", grid, "NAME=v1,v2,... evaluation values for --off-ef");

  auto* cons_cmd = app.add_subcommand("consistent", "Look for a worsening cycle");
  cons_cmd->add_option("net", net_path)->required();

  auto* sep_cmd = app.add_subcommand("sep-optimal", "SEP-optimal outcome per scenario");
  sep_cmd->add_option("net", net_path)->required();
  sep_cmd->add_option("--scenario,-s", scenario);
  sep_cmd->add_flag("--all", all, "Every scenario of the net");
  sep_cmd->add_flag("--tie-break", tie_break);

  auto* learn_cmd = app.add_subcommand("learn", "Learn a SEP-net from survey CSV");
  learn_cmd->add_option("csv", learn.csv)->required();
  learn_cmd->add_option("--alpha", learn.alpha)->check(CLI::Range(0.0, 1.0));
  learn_cmd->add_option("--out,-o", learn.out, "Learned net (default REPORT_DIR/learned.net)");
  learn_cmd->add_option("--report-dir", learn.report_dir);
  learn_cmd->add_option("--manifest", learn.manifest, "Manifest path (default REPORT_DIR/manifest.json)");
  learn_cmd->add_option("--seed", learn.seed);
  learn_cmd->add_option("--jobs,-j", learn.jobs)->check(CLI::PositiveNumber);
  learn_cmd->add_option("--test", learn.test)->check(CLI::IsMember({"auto", "rank-sum", "signed-rank"}));
  learn_cmd->add_option("--rule", learn.rule)->check(CLI::IsMember({"any", "majority"}));
  learn_cmd->add_option("--ef", learn.ef)->check(CLI::IsMember({"median", "mean"}));
  learn_cmd->add_option("--quartiles", learn.quartiles)->check(CLI::IsMember({"tukey", "linear"}));
  learn_cmd->add_option("--delta", learn.delta)->check(CLI::Range(0.0, 0.5));
  learn_cmd->add_option("--min-n", learn.min_n);
  learn_cmd->add_flag("--raw-alpha", learn.raw_alpha, "No Bonferroni correction");
  learn_cmd->add_flag("--all-reason-pairs", learn.all_reason_pairs, "Compare reasons across locations too");
  learn_cmd->add_flag("--pooled-nh4", learn.pooled_nh4, "Bucket comparisons over all locations at once");
  learn_cmd->add_flag("--nh3-random", learn.nh3_random, "Random reason subset for location vs judgment");
  learn_cmd->add_flag("--include-service-flags", learn.service_flags, "Test main_service and already_waited");
  learn_cmd->add_flag("--force-pool", learn.force_pool, "Pool question orders despite order effects");

  auto* screen_cmd = app.add_subcommand("screen", "Order-effect table for survey CSV");
  screen_cmd->add_option("csv", csv_path)->required();
  screen_cmd->add_option("--alpha", alpha);
  screen_cmd->add_flag("--raw-alpha", raw_alpha);

  auto* gen_cmd = app.add_subcommand("generate", "Write synthetic survey CSV");
  gen_cmd->add_option("--model", model)->check(CLI::IsMember({"null", "planted", "mimic"}));
  gen_cmd->add_option("--subjects", subjects, "Subjects per location");
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--shift", shift, "Planted Deli likelihood shift");
  gen_cmd->add_option("--sd", sd, "Planted model response sd");
  gen_cmd->add_option("--out,-o", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    std::size_t cap = effective_cap(cap_flag);
    if (validate_cmd->parsed()) return cmd_validate(net_path);
    if (optimal_cmd->parsed()) return cmd_optimal(net_path, scenario, tie_break);
    if (dom_cmd->parsed()) return cmd_dominance(net_path, a, b, cap);
    if (order_cmd->parsed()) return cmd_order(net_path, scenario, format, out, dot_out, off_ef, grid, cap);
    if (cons_cmd->parsed()) return cmd_consistent(net_path, cap);
    if (sep_cmd->parsed()) {
      if (!all && scenario.empty()) throw UsageError("give --scenario NAME=VALUE or --all");
      return cmd_sep_optimal(net_path, scenario, all, tie_break);
    }
    if (learn_cmd->parsed()) return cmd_learn(learn);
    if (screen_cmd->parsed()) return cmd_screen(csv_path, alpha, raw_alpha);
    if (gen_cmd->parsed()) return cmd_generate(model, subjects, seed, out, shift, sd);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << net_path << ":" << e.what() << "\n";
    return kInput;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InvalidOutcome& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    // Ambiguous tops, missing ef entries, cycles, invalid nets, order effects.
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
