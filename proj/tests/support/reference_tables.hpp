#pragma once

// p-values and summaries reported for the original survey, fed through the
// table formatters and decision rule. The survey data itself is not
// available, so these fixtures pin layout and decisions, not computation.

#include <array>
#include <string>
#include <vector>

#include "sepnet/tables.hpp"

namespace reference {

// Location x evaluation, pairs Deli-Bath, Deli-Airpt, Airpt-Bath.
inline constexpr std::array<std::array<double, 3>, 7> kLocationEval{{
    {0.2782, 0.8954, 0.3028},
    {0.1779, 0.0932, 0.9696},
    {0.1012, 0.1390, 0.3478},
    {0.0064, 0.1444, 0.2763},
    {0.0069, 0.0123, 0.3467},
    {0.4848, 0.4356, 0.1567},
    {0.0008, 0.0138, 0.2430},
}};

inline const std::string kLocationEvalCsv =
    "Scenario,Deli-Bath,Deli-Airpt,Airpt-Bath\n"
    "Global Welfare,0.2782,0.8954,0.3028\n"
    "First Person Welfare,0.1779,0.0932,0.9696\n"
    "Middle Person Welfare,0.1012,0.1390,0.3478\n"
    "Last Person Welfare,0.0064*,0.1444,0.2763\n"
    "Line Cutter Welfare,0.0069*,0.0123*,0.3467\n"
    "Universalization,0.4848,0.4356,0.1567\n"
    "Likelihood,0.0008*,0.0138*,0.2430\n";

struct JudgmentRow {
  const char* label;
  double p;
};

inline constexpr std::array<JudgmentRow, 3> kLocationJudgment{{
    {"Deli-Bath", 8.759E-01},
    {"Deli-Air", 1.548E-08},
    {"Air-Bath", 2.662E-10},
}};

inline const std::string kLocationJudgmentCsv =
    "Scenario,p-value,Rejected\n"
    "Deli-Bath,8.759E-01,False\n"
    "Deli-Air,1.548E-08,True\n"
    "Air-Bath,2.662E-10,True\n";

struct OrderRow {
  const char* code;
  double mean_first, sd_first, mean_second, sd_second, p;
};

inline constexpr std::array<OrderRow, 25> kOrder{{
    {"DFO_SP", 0.1212, 0.3264, 0.1692, 0.3750, 0.5059}, {"DFO_WA", 0.4697, 0.4991, 0.4154, 0.4928, 0.5860},
    {"DFO_SO", 0.6970, 0.4596, 0.6923, 0.4615, 0.8535}, {"DFO_CA", 0.7576, 0.4285, 0.6154, 0.4865, 0.0743},
    {"DFO_CO", 0.7424, 0.4373, 0.6308, 0.4826, 0.1979}, {"DFO_SU", 0.0909, 0.2875, 0.1385, 0.3454, 0.4281},
    {"DFO_BR", 0.0758, 0.2646, 0.1692, 0.3750, 0.1414}, {"DFO_HS", 0.1061, 0.3079, 0.1385, 0.3454, 0.6379},
    {"DFO_TP", 0.2121, 0.4088, 0.1692, 0.3750, 0.4579}, {"DFO_MA", 0.2879, 0.4528, 0.3231, 0.4677, 0.5860},
    {"DFO_FA", 0.2424, 0.4285, 0.3231, 0.4677, 0.3596}, {"DFO_SW", 0.8182, 0.3857, 0.7538, 0.4308, 0.4236},
    {"BFO_HA", 0.5507, 0.4974, 0.5217, 0.4995, 0.7317}, {"BFO_CL", 0.1594, 0.3661, 0.2899, 0.4537, 0.0971},
    {"BFO_TU", 0.1014, 0.3019, 0.1884, 0.3910, 0.1414}, {"BFO_JA", 0.1594, 0.3661, 0.2319, 0.4220, 0.3248},
    {"BFO_FR", 0.7101, 0.4537, 0.7536, 0.4309, 0.5730}, {"BFO_EL", 0.1014, 0.3019, 0.2029, 0.4022, 0.0948},
    {"BFO_BR", 0.7391, 0.4391, 0.7681, 0.4220, 0.7238}, {"AFO_MN", 0.4030, 0.4905, 0.4219, 0.4939, 0.6096},
    {"AFO_BA", 0.4328, 0.4955, 0.4531, 0.4978, 0.7526}, {"AFO_JA", 0.4478, 0.4973, 0.5625, 0.4961, 0.1088},
    {"AFO_CA", 0.5224, 0.4995, 0.5781, 0.4939, 0.3471}, {"AFO_BR", 0.4478, 0.4973, 0.4062, 0.4911, 0.4285},
    {"AFO_HR", 0.8209, 0.3834, 0.7969, 0.4023, 0.5607},
}};

inline const std::string kOrderCsv =
    "Scenario,PREFthenEVAL,EVALthenPREF,p-value,Rejected\n"
    "DFO_SP,0.1212 (0.3264),0.1692 (0.3750),0.5059,False\n"
    "DFO_WA,0.4697 (0.4991),0.4154 (0.4928),0.5860,False\n"
    "DFO_SO,0.6970 (0.4596),0.6923 (0.4615),0.8535,False\n"
    "DFO_CA,0.7576 (0.4285),0.6154 (0.4865),0.0743,False\n"
    "DFO_CO,0.7424 (0.4373),0.6308 (0.4826),0.1979,False\n"
    "DFO_SU,0.0909 (0.2875),0.1385 (0.3454),0.4281,False\n"
    "DFO_BR,0.0758 (0.2646),0.1692 (0.3750),0.1414,False\n"
    "DFO_HS,0.1061 (0.3079),0.1385 (0.3454),0.6379,False\n"
    "DFO_TP,0.2121 (0.4088),0.1692 (0.3750),0.4579,False\n"
    "DFO_MA,0.2879 (0.4528),0.3231 (0.4677),0.5860,False\n"
    "DFO_FA,0.2424 (0.4285),0.3231 (0.4677),0.3596,False\n"
    "DFO_SW,0.8182 (0.3857),0.7538 (0.4308),0.4236,False\n"
    "BFO_HA,0.5507 (0.4974),0.5217 (0.4995),0.7317,False\n"
    "BFO_CL,0.1594 (0.3661),0.2899 (0.4537),0.0971,False\n"
    "BFO_TU,0.1014 (0.3019),0.1884 (0.3910),0.1414,False\n"
    "BFO_JA,0.1594 (0.3661),0.2319 (0.4220),0.3248,False\n"
    "BFO_FR,0.7101 (0.4537),0.7536 (0.4309),0.5730,False\n"
    "BFO_EL,0.1014 (0.3019),0.2029 (0.4022),0.0948,False\n"
    "BFO_BR,0.7391 (0.4391),0.7681 (0.4220),0.7238,False\n"
    "AFO_MN,0.4030 (0.4905),0.4219 (0.4939),0.6096,False\n"
    "AFO_BA,0.4328 (0.4955),0.4531 (0.4978),0.7526,False\n"
    "AFO_JA,0.4478 (0.4973),0.5625 (0.4961),0.1088,False\n"
    "AFO_CA,0.5224 (0.4995),0.5781 (0.4939),0.3471,False\n"
    "AFO_BR,0.4478 (0.4973),0.4062 (0.4911),0.4285,False\n"
    "AFO_HR,0.8209 (0.3834),0.7969 (0.4023),0.5607,False\n";

/// Rows with decisions at per-test threshold `threshold`.
inline std::vector<sepnet::LocationEvalRow> location_eval_rows(double threshold) {
  std::vector<sepnet::LocationEvalRow> rows;
  for (std::size_t k = 0; k < kLocationEval.size(); ++k) {
    sepnet::LocationEvalRow r{std::string(sepnet::kEvalTitles[k]), {}};
    for (std::size_t c = 0; c < 3; ++c) r.cells[c] = sepnet::decide_cell(kLocationEval[k][c], threshold);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<sepnet::LocationJudgmentRow> location_judgment_rows(double threshold) {
  std::vector<sepnet::LocationJudgmentRow> rows;
  for (const auto& r : kLocationJudgment) rows.push_back({r.label, sepnet::decide_cell(r.p, threshold)});
  return rows;
}

inline std::vector<sepnet::OrderTableRow> order_rows(double threshold) {
  std::vector<sepnet::OrderTableRow> rows;
  for (const auto& r : kOrder)
    rows.push_back({r.code, r.mean_first, r.sd_first, r.mean_second, r.sd_second, sepnet::decide_cell(r.p, threshold)});
  return rows;
}

}  // namespace reference
