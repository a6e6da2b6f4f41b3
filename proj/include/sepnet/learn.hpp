#pragma once

// Structure learning from survey records. Four families of pairwise rank
// tests decide the edges of a SEP-net:
//   NH1  location -> evaluation     (location pairs)
//   NH2  reason   -> evaluation     (reason pairs)
//   NH3  location -> judgment       (location pairs, per-subject mean judgment)
//   NH4  evaluation -> judgment     (quartile-bucket pairs)
// The learned net then gets ef points per scenario context and an empirical
// cp-table for the judgment.

#include <algorithm>
#include <atomic>
#include <functional>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sepnet/model.hpp"
#include "sepnet/stats.hpp"
#include "sepnet/survey.hpp"

namespace sepnet {

/// Auto: signed-rank paired by subject where the same subjects answer both
/// sides (reason pairs within a location), rank-sum elsewhere.
enum class TestChoice { Auto, RankSum, SignedRank };
enum class AggregationRule { AnyPair, Majority };
enum class EfEstimator { Median, Mean };

inline std::string_view to_string(TestChoice t) {
  switch (t) {
    case TestChoice::Auto: return "auto";
    case TestChoice::RankSum: return "rank-sum";
    case TestChoice::SignedRank: return "signed-rank";
  }
  return "?";
}
inline std::string_view to_string(AggregationRule r) { return r == AggregationRule::AnyPair ? "any" : "majority"; }
inline std::string_view to_string(EfEstimator e) { return e == EfEstimator::Median ? "median" : "mean"; }

struct LearnConfig {
  double alpha = 0.05;
  TestChoice test = TestChoice::Auto;
  AggregationRule rule = AggregationRule::AnyPair;
  /// Bonferroni within each family of tests (one family per candidate edge,
  /// and the order screen as a whole). Off means every test uses raw alpha.
  bool bonferroni = true;
  /// NH2 over every reason pair instead of pairs sharing a location.
  bool all_reason_pairs = false;
  /// NH4 compares buckets within each location instead of pooling locations.
  bool stratify_nh4 = true;
  /// Smaller groups (or fewer pairs) skip the test.
  std::size_t min_n = 5;
  EfEstimator ef = EfEstimator::Median;
  /// Half-width of the indifference band around a yes-rate of 0.5.
  double delta = 0.1;
  /// Reasons per location aggregated for NH3.
  std::size_t nh3_reasons = 4;
  /// Draw the NH3 reasons at random (with `seed`) instead of the first ones listed.
  bool nh3_random = false;
  std::uint64_t seed = 0;
  /// Add main_service and already_waited as candidate scenario variables.
  bool include_service_flags = false;
  QuartileMethod quartiles = QuartileMethod::Tukey;
  std::size_t jobs = 1;
};

struct LabeledTest {
  std::string label;
  TestResult result;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  bool skipped = false;
  std::string note;
};

struct EdgeReport {
  std::string hypothesis;
  std::string source;
  std::string target;
  std::vector<LabeledTest> tests;
  /// Per-test threshold after any correction.
  double threshold = 0.05;
  bool edge_present = false;
  std::string rule;

  std::size_t run_count() const {
    return static_cast<std::size_t>(std::count_if(tests.begin(), tests.end(), [](auto& t) { return !t.skipped; }));
  }
  std::size_t reject_count() const {
    return static_cast<std::size_t>(
        std::count_if(tests.begin(), tests.end(), [](auto& t) { return !t.skipped && t.result.reject; }));
  }
};

struct OrderRow {
  std::string reason;
  std::string code;
  std::size_t n_judge_first = 0;
  std::size_t n_eval_first = 0;
  double mean_judge_first = 0.0, sd_judge_first = 0.0;
  double mean_eval_first = 0.0, sd_eval_first = 0.0;
  TestResult result;
};

struct OrderScreen {
  std::vector<OrderRow> rows;
  /// Reasons missing one of the two order conditions.
  std::vector<std::string> skipped;
  /// Per-test threshold after any correction.
  double threshold = 0.05;
  bool pooled = true;
};

/// Ordered (variable, label) pairs selecting records: "location", "reason",
/// "main_service"/"already_waited" (yes/no) or an evaluation name with a
/// bucket label.
using ContextSpec = std::vector<std::pair<std::string, std::string>>;

struct LearnResult {
  OrderScreen screen;
  std::vector<EdgeReport> edges;
  NetDocument net;
  std::map<std::string, BucketBounds> bounds;
  std::vector<std::string> log;
};

namespace learn_detail {

inline constexpr std::array<std::pair<Location, Location>, 3> kLocationPairs{
    {{Location::Deli, Location::Bathroom}, {Location::Deli, Location::Airport}, {Location::Airport, Location::Bathroom}}};
/// Column labels used in the location-versus-evaluation table.
inline constexpr std::array<std::string_view, 3> kNh1Labels{"Deli-Bath", "Deli-Airpt", "Airpt-Bath"};
/// Row labels used in the location-versus-judgment table.
inline constexpr std::array<std::string_view, 3> kNh3Labels{"Deli-Bath", "Deli-Air", "Air-Bath"};

inline std::size_t location_index(Location l) { return static_cast<std::size_t>(l); }

inline std::size_t reason_index(std::string_view label) {
  const auto* r = find_reason(label);
  return r ? static_cast<std::size_t>(r - kReasons.data()) : kReasons.size();
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

/// One side of a comparison: raw values and the per-subject breakdown.
struct Group {
  std::vector<double> values;
  std::map<std::string, std::vector<double>> by_subject;

  void add(const std::string& subject, double v) {
    values.push_back(v);
    by_subject[subject].push_back(v);
  }
};

inline LabeledTest compare(std::string label, const Group& a, const Group& b, bool paired,
                           const LearnConfig& cfg) {
  LabeledTest t;
  t.label = std::move(label);
  if (paired) {
    std::vector<double> x, y;
    for (const auto& [subject, xs] : a.by_subject) {
      auto it = b.by_subject.find(subject);
      if (it == b.by_subject.end()) continue;
      x.push_back(mean(xs));
      y.push_back(mean(it->second));
    }
    t.n_x = t.n_y = x.size();
    if (x.size() < cfg.min_n) {
      t.skipped = true;
      t.note = std::to_string(x.size()) + " paired subject(s), need " + std::to_string(cfg.min_n);
      return t;
    }
    t.result = signed_rank(x, y, cfg.alpha);
  } else {
    t.n_x = a.values.size();
    t.n_y = b.values.size();
    if (t.n_x < cfg.min_n || t.n_y < cfg.min_n) {
      t.skipped = true;
      t.note = "group sizes " + std::to_string(t.n_x) + " and " + std::to_string(t.n_y) + ", need " +
               std::to_string(cfg.min_n);
      return t;
    }
    t.result = rank_sum(a.values, b.values, cfg.alpha);
  }
  return t;
}

inline bool use_pairing(TestChoice choice, bool same_subjects) {
  switch (choice) {
    case TestChoice::Auto: return same_subjects;
    case TestChoice::RankSum: return false;
    case TestChoice::SignedRank: return true;
  }
  return false;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// A family of tests whose results decide one edge.
struct Family {
  std::string hypothesis, source, target;
  bool bonferroni = false;
  std::vector<std::function<LabeledTest()>> tasks;
};

inline EdgeReport decide(Family& f, std::vector<LabeledTest> tests, const LearnConfig& cfg) {
  EdgeReport r;
  r.hypothesis = f.hypothesis;
  r.source = f.source;
  r.target = f.target;
  r.tests = std::move(tests);
  std::size_t run = r.run_count();
  r.threshold = f.bonferroni && run > 0 ? cfg.alpha / static_cast<double>(run) : cfg.alpha;
  for (auto& t : r.tests)
    if (!t.skipped) t.result.reject = t.result.p_value < r.threshold;
  std::size_t rejected = r.reject_count();
  r.edge_present = cfg.rule == AggregationRule::AnyPair ? rejected > 0 : 2 * rejected > run;
  r.rule = std::string(cfg.rule == AggregationRule::AnyPair ? "any pair" : "majority of pairs") + " rejects at p < " +
           detail::format_number(r.threshold) + (f.bonferroni ? " (bonferroni, " : " (") + std::to_string(rejected) +
           "/" + std::to_string(run) + " rejected)";
  return r;
}

inline bool matches(const SurveyRecord& r, const ContextSpec& ctx, const std::map<std::string, BucketBounds>& bounds) {
  for (const auto& [key, label] : ctx) {
    if (key == "location") {
      if (to_string(r.location) != label) return false;
    } else if (key == "reason") {
      if (r.reason != label) return false;
    } else if (key == "main_service") {
      if (yes_no(r.main_service) != label) return false;
    } else if (key == "already_waited") {
      if (yes_no(r.already_waited) != label) return false;
    } else if (auto ev = eval_index(key)) {
      auto it = bounds.find(key);
      if (it == bounds.end()) throw InvalidOutcome("no bucket boundaries for '" + key + "'");
      if (kBucketLabels[bucket_of(r.evals[*ev], it->second)] != label) return false;
    } else {
      throw InvalidOutcome("unknown context variable '" + key + "'");
    }
  }
  return true;
}

inline std::vector<std::string> labels_of(const ContextSpec& ctx) {
  std::vector<std::string> out;
  for (const auto& [k, v] : ctx) out.push_back(v);
  return out;
}

}  // namespace learn_detail

// ---------------------------------------------------------------------------
// Order-effect screen

/// Compares judgments between the two question orders, per reason. With
/// `bonferroni` each test is held to alpha over the number of tests run.
inline OrderScreen order_effect_screen(const std::vector<SurveyRecord>& records, double alpha = 0.05,
                                       bool bonferroni = true) {
  OrderScreen screen;
  for (const auto& info : kReasons) {
    std::vector<double> jf, ef;
    for (const auto& r : records) {
      if (r.reason != info.label) continue;
      (r.order == OrderCondition::JudgeFirst ? jf : ef).push_back(r.judgment ? 1.0 : 0.0);
    }
    if (jf.empty() && ef.empty()) continue;
    if (jf.empty() || ef.empty()) {
      screen.skipped.emplace_back(info.label);
      continue;
    }
    OrderRow row;
    row.reason = std::string(info.label);
    row.code = std::string(info.code);
    row.n_judge_first = jf.size();
    row.n_eval_first = ef.size();
    row.mean_judge_first = mean(jf);
    row.sd_judge_first = stddev(jf);
    row.mean_eval_first = mean(ef);
    row.sd_eval_first = stddev(ef);
    row.result = rank_sum(jf, ef, alpha);
    screen.rows.push_back(std::move(row));
  }
  screen.threshold = bonferroni && !screen.rows.empty() ? alpha / static_cast<double>(screen.rows.size()) : alpha;
  for (auto& row : screen.rows) {
    row.result.reject = row.result.p_value < screen.threshold;
    if (row.result.reject) screen.pooled = false;
  }
  return screen;
}

// ---------------------------------------------------------------------------
// Estimators

/// Point estimate of an evaluation over the records matching `context`.
inline double estimate_ef(const std::vector<SurveyRecord>& records, std::string_view evar, const ContextSpec& context,
                          EfEstimator estimator = EfEstimator::Median) {
  auto ev = eval_index(evar);
  if (!ev) throw InvalidOutcome("unknown evaluation variable '" + std::string(evar) + "'");
  std::vector<double> values;
  for (const auto& r : records)
    if (learn_detail::matches(r, context, {})) values.push_back(r.evals[*ev]);
  if (values.empty()) throw MissingEfEntry(std::string(evar), learn_detail::labels_of(context));
  return estimator == EfEstimator::Median ? median(values) : mean(values);
}

/// cp-statement for the judgment from a yes count: yes > no above 0.5 + delta,
/// no > yes below 0.5 - delta, indifference in between. The rate is kept as
/// the annotation.
inline CpStatement judgment_statement(std::vector<std::string> context, std::size_t yes, std::size_t total,
                                      double delta) {
  CpStatement st;
  st.context = std::move(context);
  double rate = static_cast<double>(yes) / static_cast<double>(total);
  if (rate > 0.5 + delta)
    st.strata = {{"yes"}, {"no"}};
  else if (rate < 0.5 - delta)
    st.strata = {{"no"}, {"yes"}};
  else
    st.strata = {{"yes", "no"}};
  st.annotation = rate;
  return st;
}

/// Empirical judgment statement for the records matching `context`, or
/// nothing when fewer than min_n match.
inline std::optional<CpStatement> cp_table_estimate(const std::vector<SurveyRecord>& records,
                                                    const ContextSpec& context,
                                                    const std::map<std::string, BucketBounds>& bounds,
                                                    const LearnConfig& cfg = {}) {
  std::size_t yes = 0, total = 0;
  for (const auto& r : records)
    if (learn_detail::matches(r, context, bounds)) {
      ++total;
      yes += r.judgment ? 1 : 0;
    }
  if (total == 0 || total < cfg.min_n) return std::nullopt;
  return judgment_statement(learn_detail::labels_of(context), yes, total, cfg.delta);
}

/// Bucket boundaries of every evaluation over all records.
inline std::map<std::string, BucketBounds> evaluation_bounds(const std::vector<SurveyRecord>& records,
                                                             QuartileMethod method = QuartileMethod::Tukey) {
  std::map<std::string, BucketBounds> out;
  if (records.empty()) return out;
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(r.evals[k]);
    out[std::string(kEvalNames[k])] = quartile_bounds(v, method);
  }
  return out;
}

/// The reasons aggregated per location for NH3.
inline std::vector<std::string> nh3_reason_subset(const LearnConfig& cfg) {
  std::vector<std::string> out;
  std::mt19937_64 rng(cfg.seed);
  for (auto loc : kLocations) {
    auto rs = reasons_at(loc);
    if (cfg.nh3_random) std::shuffle(rs.begin(), rs.end(), rng);
    for (std::size_t i = 0; i < std::min(cfg.nh3_reasons, rs.size()); ++i) out.emplace_back(rs[i]->label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure inference

/// Runs NH1-NH4 and assembles the learned net. Records are assumed pooled
/// across question orders.
inline LearnResult infer_structure(const std::vector<SurveyRecord>& records, const LearnConfig& cfg = {}) {
  using namespace learn_detail;
  LearnResult out;
  out.bounds = evaluation_bounds(records, cfg.quartiles);
  std::vector<Family> families;

  // NH1: location pairs per evaluation, records at different locations come
  // from different subjects.
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    Family f{"NH1", "location", std::string(kEvalNames[k]), cfg.bonferroni, {}};
    for (std::size_t p = 0; p < kLocationPairs.size(); ++p) {
      f.tasks.push_back([&records, &cfg, k, p] {
        Group a, b;
        for (const auto& r : records) {
          if (r.location == kLocationPairs[p].first) a.add(r.subject_id, r.evals[k]);
          if (r.location == kLocationPairs[p].second) b.add(r.subject_id, r.evals[k]);
        }
        return compare(std::string(kNh1Labels[p]), a, b, use_pairing(cfg.test, false), cfg);
      });
    }
    families.push_back(std::move(f));
  }

  // NH2: reason pairs per evaluation. Reasons at one location are answered by
  // the same subjects.
  std::vector<std::pair<std::size_t, std::size_t>> reason_pairs;
  for (std::size_t i = 0; i < kReasons.size(); ++i)
    for (std::size_t j = i + 1; j < kReasons.size(); ++j)
      if (cfg.all_reason_pairs || kReasons[i].location == kReasons[j].location) reason_pairs.emplace_back(i, j);
  std::vector<Group> by_reason_eval(kReasons.size() * kEvalCount);
  for (const auto& r : records) {
    auto ri = reason_index(r.reason);
    if (ri == kReasons.size()) continue;
    for (std::size_t k = 0; k < kEvalCount; ++k) by_reason_eval[ri * kEvalCount + k].add(r.subject_id, r.evals[k]);
  }
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    Family f{"NH2", "reason", std::string(kEvalNames[k]), cfg.bonferroni, {}};
    for (auto [i, j] : reason_pairs) {
      f.tasks.push_back([&by_reason_eval, &cfg, k, i = i, j = j] {
        bool same = kReasons[i].location == kReasons[j].location;
        return compare(std::string(kReasons[i].label) + "-" + std::string(kReasons[j].label),
                       by_reason_eval[i * kEvalCount + k], by_reason_eval[j * kEvalCount + k],
                       use_pairing(cfg.test, same), cfg);
      });
    }
    families.push_back(std::move(f));
  }

  // Optional service flags: yes/no groups per evaluation.
  if (cfg.include_service_flags) {
    for (std::string flag : {"main_service", "already_waited"}) {
      for (std::size_t k = 0; k < kEvalCount; ++k) {
        Family f{"NH2", flag, std::string(kEvalNames[k]), cfg.bonferroni, {}};
        f.tasks.push_back([&records, &cfg, k, flag] {
          Group a, b;
          for (const auto& r : records) {
            bool v = flag == "main_service" ? r.main_service : r.already_waited;
            (v ? b : a).add(r.subject_id, r.evals[k]);
          }
          return compare("no-yes", a, b, use_pairing(cfg.test, true), cfg);
        });
        families.push_back(std::move(f));
      }
    }
  }

  // NH3: per-subject mean judgment over a fixed reason subset.
  {
    auto subset = nh3_reason_subset(cfg);
    std::set<std::string> chosen(subset.begin(), subset.end());
    out.log.push_back("NH3 reasons: " + detail::join(subset, ","));
    Family f{"NH3", "location", "judgment", cfg.bonferroni, {}};
    for (std::size_t p = 0; p < kLocationPairs.size(); ++p) {
      f.tasks.push_back([&records, &cfg, chosen, p] {
        std::map<std::string, std::vector<double>> a_subj, b_subj;
        for (const auto& r : records) {
          if (!chosen.count(r.reason)) continue;
          if (r.location == kLocationPairs[p].first) a_subj[r.subject_id].push_back(r.judgment);
          if (r.location == kLocationPairs[p].second) b_subj[r.subject_id].push_back(r.judgment);
        }
        Group a, b;
        for (const auto& [s, v] : a_subj) a.add(s, mean(v));
        for (const auto& [s, v] : b_subj) b.add(s, mean(v));
        return compare(std::string(kNh3Labels[p]), a, b, use_pairing(cfg.test, false), cfg);
      });
    }
    families.push_back(std::move(f));
  }

  // NH4: judgment between quartile buckets of each evaluation.
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    const auto bounds = out.bounds.count(std::string(kEvalNames[k])) ? out.bounds.at(std::string(kEvalNames[k]))
                                                                     : BucketBounds{};
    Family f{"NH4", std::string(kEvalNames[k]), "judgment", cfg.bonferroni, {}};
    std::vector<std::optional<Location>> strata;
    if (cfg.stratify_nh4)
      strata.assign(kLocations.begin(), kLocations.end());
    else
      strata.push_back(std::nullopt);
    for (auto stratum : strata) {
      for (std::size_t qa = 0; qa < 4; ++qa)
        for (std::size_t qb = qa + 1; qb < 4; ++qb) {
          std::string label = (stratum ? std::string(to_string(*stratum)) + ":" : std::string()) +
                              std::string(kBucketLabels[qa]) + "-" + std::string(kBucketLabels[qb]);
          f.tasks.push_back([&records, &cfg, k, bounds, stratum, qa, qb, label] {
            Group a, b;
            for (const auto& r : records) {
              if (stratum && r.location != *stratum) continue;
              auto q = bucket_of(r.evals[k], bounds);
              if (q == qa) a.add(r.subject_id, r.judgment);
              if (q == qb) b.add(r.subject_id, r.judgment);
            }
            return compare(label, a, b, use_pairing(cfg.test, false), cfg);
          });
        }
    }
    families.push_back(std::move(f));
  }

  // Run every test, each into its own slot, then decide per family.
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t fi = 0; fi < families.size(); ++fi)
    for (std::size_t ti = 0; ti < families[fi].tasks.size(); ++ti) index.emplace_back(fi, ti);
  std::vector<LabeledTest> results(index.size());
  parallel_for(index.size(), cfg.jobs,
               [&](std::size_t i) { results[i] = families[index[i].first].tasks[index[i].second](); });
  std::size_t at = 0;
  for (auto& f : families) {
    std::vector<LabeledTest> tests(results.begin() + static_cast<std::ptrdiff_t>(at),
                                   results.begin() + static_cast<std::ptrdiff_t>(at + f.tasks.size()));
    at += f.tasks.size();
    out.edges.push_back(decide(f, std::move(tests), cfg));
    for (const auto& t : out.edges.back().tests)
      if (t.skipped) out.log.push_back(f.hypothesis + " " + f.source + "->" + f.target + " " + t.label + " skipped: " + t.note);
  }

  // Assemble the net.
  auto has_edge = [&](std::string_view source, std::string_view target) {
    for (const auto& e : out.edges)
      if (e.source == source && e.target == target && e.edge_present) return true;
    return false;
  };
  NetDocument& net = out.net;
  net.name = "learned";
  VariableSpec reason{"reason", VarClass::Scenario, {}, {}, std::nullopt, {}};
  for (const auto& r : kReasons) reason.labels.emplace_back(r.label);
  net.variables.push_back(reason);
  VariableSpec location{"location", VarClass::Scenario, {}, {}, std::nullopt, {}};
  for (auto l : kLocations) location.labels.emplace_back(to_string(l));
  net.variables.push_back(location);
  std::vector<std::string> scenario_vars{"reason", "location"};
  if (cfg.include_service_flags) {
    for (std::string flag : {"main_service", "already_waited"}) {
      net.variables.push_back({flag, VarClass::Scenario, {"no", "yes"}, {}, std::nullopt, {}});
      scenario_vars.push_back(flag);
    }
  }

  for (std::size_t k = 0; k < kEvalCount; ++k) {
    const std::string name(kEvalNames[k]);
    auto [lo, hi] = eval_range(k);
    VariableSpec ev{name, VarClass::Evaluation, {}, {double(lo), double(hi)}, std::nullopt, {}};
    if (out.bounds.count(name)) ev.buckets = out.bounds.at(name);
    for (const auto& s : scenario_vars)
      if (has_edge(s, name)) ev.parents.push_back(s);
    net.variables.push_back(ev);

    // ef entries for every observed parent context, in label order.
    std::map<std::vector<std::size_t>, ContextSpec> contexts;
    for (const auto& r : records) {
      ContextSpec ctx;
      std::vector<std::size_t> key;
      for (const auto& p : ev.parents) {
        std::string label = p == "reason"     ? r.reason
                            : p == "location" ? std::string(to_string(r.location))
                            : p == "main_service" ? yes_no(r.main_service)
                                                  : yes_no(r.already_waited);
        key.push_back(*net.find(p)->label_index(label));
        ctx.emplace_back(p, label);
      }
      contexts.emplace(std::move(key), std::move(ctx));
    }
    EvaluationFunction ef{name, {}};
    for (const auto& [key, ctx] : contexts)
      ef.table.push_back({learn_detail::labels_of(ctx), estimate_ef(records, name, ctx, cfg.ef)});
    if (!ef.table.empty()) net.eval_functions[name] = std::move(ef);
  }

  VariableSpec judgment{"judgment", VarClass::Preference, {"yes", "no"}, {}, std::nullopt, {}};
  if (has_edge("location", "judgment")) judgment.parents.push_back("location");
  for (std::size_t k = 0; k < kEvalCount; ++k)
    if (has_edge(kEvalNames[k], "judgment")) judgment.parents.emplace_back(kEvalNames[k]);
  net.variables.push_back(judgment);

  // Judgment statements for every context with enough records, keyed by the
  // records' own bucketed answers.
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> counts;  // key -> (yes, total)
  for (const auto& r : records) {
    std::vector<std::size_t> key;
    for (const auto& p : judgment.parents) {
      if (p == "location")
        key.push_back(location_index(r.location));
      else
        key.push_back(bucket_of(r.evals[*eval_index(p)], out.bounds.at(p)));
    }
    auto& c = counts[key];
    c.first += r.judgment ? 1 : 0;
    c.second += 1;
  }
  // Contexts reached by projecting an observed scenario through the ef
  // tables get a row too, estimated from that scenario's records, so
  // sep-optimal is defined wherever the data is.
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> projected;
  {
    std::map<std::string, std::map<std::vector<std::string>, std::size_t>> ef_bucket;
    for (const auto& p : judgment.parents) {
      if (p == "location") continue;
      const auto& ef = net.eval_functions.at(p);
      for (const auto& entry : ef.table) ef_bucket[p][entry.context] = bucket_of(entry.value, out.bounds.at(p));
    }
    for (const auto& r : records) {
      std::vector<std::size_t> key;
      for (const auto& p : judgment.parents) {
        if (p == "location") {
          key.push_back(location_index(r.location));
          continue;
        }
        std::vector<std::string> ctx;
        for (const auto& q : net.find(p)->parents)
          ctx.push_back(q == "reason"         ? r.reason
                        : q == "location"     ? std::string(to_string(r.location))
                        : q == "main_service" ? yes_no(r.main_service)
                                              : yes_no(r.already_waited));
        key.push_back(ef_bucket.at(p).at(ctx));
      }
      auto& c = projected[key];
      c.first += r.judgment ? 1 : 0;
      c.second += 1;
    }
  }
  for (const auto& [key, c] : projected)
    if (!counts.count(key) || counts.at(key).second < cfg.min_n) counts[key] = c;

  std::vector<CpStatement> table;
  for (const auto& [key, c] : counts) {
    if (c.second < cfg.min_n) continue;
    std::vector<std::string> ctx;
    for (std::size_t i = 0; i < key.size(); ++i)
      ctx.push_back(judgment.parents[i] == "location" ? std::string(to_string(kLocations[key[i]]))
                                                      : std::string(kBucketLabels[key[i]]));
    table.push_back(judgment_statement(std::move(ctx), c.first, c.second, cfg.delta));
  }
  if (!table.empty()) net.cp_tables["judgment"] = std::move(table);
  return out;
}

}  // namespace sepnet
