#pragma once

// Report tables. Three of them follow the published layouts:
//   location x evaluation p-values   Scenario,Deli-Bath,Deli-Airpt,Airpt-Bath
//   location x judgment              Scenario,p-value,Rejected
//   order effect per reason          Scenario,PREFthenEVAL,EVALthenPREF,p-value,Rejected
// Rejected cells in the first table carry a trailing '*' in place of bold.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sepnet/detail/text.hpp"
#include "sepnet/learn.hpp"
#include "sepnet/stats.hpp"

namespace sepnet {

struct PCell {
  double p = 1.0;
  bool rejected = false;
};

struct LocationEvalRow {
  std::string title;
  std::array<std::optional<PCell>, 3> cells;
};

struct LocationJudgmentRow {
  std::string label;
  PCell cell;
};

struct OrderTableRow {
  std::string label;
  double mean_first = 0, sd_first = 0, mean_second = 0, sd_second = 0;
  PCell cell;
};

/// The decision rule shared by every table.
inline PCell decide_cell(double p, double alpha) { return {p, p < alpha}; }

inline std::string format_location_eval_table(const std::vector<LocationEvalRow>& rows) {
  std::string out = "Scenario,Deli-Bath,Deli-Airpt,Airpt-Bath\n";
  for (const auto& r : rows) {
    out += detail::csv_field(r.title);
    for (const auto& c : r.cells) {
      out += ",";
      out += c ? detail::printf_string("%.4f", c->p) + (c->rejected ? "*" : "") : "NA";
    }
    out += "\n";
  }
  return out;
}

inline std::string format_location_judgment_table(const std::vector<LocationJudgmentRow>& rows) {
  std::string out = "Scenario,p-value,Rejected\n";
  for (const auto& r : rows)
    out += detail::csv_field(r.label) + "," + detail::printf_string("%.3E", r.cell.p) + "," +
           (r.cell.rejected ? "True" : "False") + "\n";
  return out;
}

inline std::string format_order_table(const std::vector<OrderTableRow>& rows) {
  std::string out = "Scenario,PREFthenEVAL,EVALthenPREF,p-value,Rejected\n";
  for (const auto& r : rows)
    out += detail::csv_field(r.label) + "," + detail::printf_string("%.4f (%.4f)", r.mean_first, r.sd_first) + "," +
           detail::printf_string("%.4f (%.4f)", r.mean_second, r.sd_second) + "," +
           detail::printf_string("%.4f", r.cell.p) + "," + (r.cell.rejected ? "True" : "False") + "\n";
  return out;
}

// Rows from learner output.

inline std::vector<LocationEvalRow> location_eval_rows(const std::vector<EdgeReport>& edges) {
  std::vector<LocationEvalRow> rows;
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    LocationEvalRow row{std::string(kEvalTitles[k]), {}};
    for (const auto& e : edges) {
      if (e.hypothesis != "NH1" || e.target != kEvalNames[k]) continue;
      for (const auto& t : e.tests)
        for (std::size_t c = 0; c < 3; ++c)
          if (t.label == learn_detail::kNh1Labels[c] && !t.skipped) row.cells[c] = PCell{t.result.p_value, t.result.reject};
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<LocationJudgmentRow> location_judgment_rows(const std::vector<EdgeReport>& edges) {
  std::vector<LocationJudgmentRow> rows;
  for (const auto& e : edges)
    if (e.hypothesis == "NH3")
      for (const auto& t : e.tests)
        if (!t.skipped) rows.push_back({t.label, {t.result.p_value, t.result.reject}});
  return rows;
}

inline std::vector<OrderTableRow> order_rows(const OrderScreen& screen) {
  std::vector<OrderTableRow> rows;
  for (const auto& r : screen.rows)
    rows.push_back({r.code, r.mean_judge_first, r.sd_judge_first, r.mean_eval_first, r.sd_eval_first,
                    {r.result.p_value, r.result.reject}});
  return rows;
}

// Flat exports.

/// `label,statistic,p_value,rejected`; one row per test that ran.
inline std::string format_test_results(const std::vector<EdgeReport>& edges) {
  std::string out = "label,statistic,p_value,rejected\n";
  for (const auto& e : edges)
    for (const auto& t : e.tests) {
      if (t.skipped) continue;
      out += detail::csv_field(e.hypothesis + ":" + e.source + "->" + e.target + ":" + t.label) + "," +
             detail::format_number(t.result.statistic) + "," + detail::format_number(t.result.p_value) + "," +
             (t.result.reject ? "true" : "false") + "\n";
    }
  return out;
}

/// `hypothesis,source,target,tests,rejected,edge,rule`; one row per family.
inline std::string format_edge_reports(const std::vector<EdgeReport>& edges) {
  std::string out = "hypothesis,source,target,tests,rejected,edge,rule\n";
  for (const auto& e : edges)
    out += e.hypothesis + "," + detail::csv_field(e.source) + "," + detail::csv_field(e.target) + "," +
           std::to_string(e.run_count()) + "," + std::to_string(e.reject_count()) + "," +
           (e.edge_present ? "true" : "false") + "," + detail::csv_field(e.rule) + "\n";
  return out;
}

/// `label,p_value,method,n_judge_first,n_eval_first` with skipped reasons listed last.
inline std::string format_order_details(const OrderScreen& screen) {
  std::string out = "label,p_value,method,n_judge_first,n_eval_first\n";
  for (const auto& r : screen.rows)
    out += r.code + "," + detail::format_number(r.result.p_value) + "," + std::string(to_string(r.result.method)) +
           "," + std::to_string(r.n_judge_first) + "," + std::to_string(r.n_eval_first) + "\n";
  for (const auto& s : screen.skipped) out += detail::csv_field(s) + ",NA,skipped,,\n";
  return out;
}

inline std::string format_correlations(const CorrelationMatrix& m) {
  std::string out = "variable";
  for (const auto& n : m.names) out += "," + detail::csv_field(n);
  out += "\n";
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out += detail::csv_field(m.names[i]);
    for (std::size_t j = 0; j < m.names.size(); ++j)
      out += "," + (m.defined[i][j] ? detail::printf_string("%.4f", m.values[i][j]) : std::string("NA"));
    out += "\n";
  }
  return out;
}

inline CorrelationMatrix survey_correlations(const std::vector<SurveyRecord>& records) {
  std::vector<NamedColumn> cols;
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    NamedColumn c{std::string(kEvalNames[k]), {}};
    for (const auto& r : records) c.values.push_back(r.evals[k]);
    cols.push_back(std::move(c));
  }
  NamedColumn j{"judgment", {}};
  for (const auto& r : records) j.values.push_back(r.judgment ? 1.0 : 0.0);
  cols.push_back(std::move(j));
  return pearson_matrix(cols);
}

}  // namespace sepnet
