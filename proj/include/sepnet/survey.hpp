#pragma once

// Survey records: one subject's answers for one line-cutting scenario.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sepnet/detail/text.hpp"
#include "sepnet/errors.hpp"

namespace sepnet {

enum class Location { Deli, Bathroom, Airport };
enum class OrderCondition { JudgeFirst, EvalFirst };

inline constexpr std::array<Location, 3> kLocations{Location::Deli, Location::Bathroom, Location::Airport};

inline std::string_view to_string(Location l) {
  switch (l) {
    case Location::Deli: return "Deli";
    case Location::Bathroom: return "Bathroom";
    case Location::Airport: return "Airport";
  }
  return "?";
}

inline std::optional<Location> parse_location(std::string_view s) {
  for (auto l : kLocations)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

inline std::string_view to_string(OrderCondition c) { return c == OrderCondition::JudgeFirst ? "JudgeFirst" : "EvalFirst"; }

inline std::optional<OrderCondition> parse_order_condition(std::string_view s) {
  if (s == "JudgeFirst") return OrderCondition::JudgeFirst;
  if (s == "EvalFirst") return OrderCondition::EvalFirst;
  return std::nullopt;
}

struct ReasonInfo {
  std::string_view label;
  Location location;
  /// The cutter wants the service the line is for.
  bool main_service;
  bool already_waited;
  /// Short code used in the order-effect table, e.g. DFO_SP.
  std::string_view code;
};

/// The 25 reasons, grouped by location in survey order.
inline constexpr std::array<ReasonInfo, 25> kReasons{{
    {"Spoon", Location::Deli, false, true, "DFO_SP"},
    {"Water", Location::Deli, false, true, "DFO_WA"},
    {"Soda", Location::Deli, true, true, "DFO_SO"},
    {"CateringOrder", Location::Deli, false, false, "DFO_CA"},
    {"Fasted", Location::Deli, true, false, "DFO_CO"},
    {"Diabetic", Location::Deli, true, false, "DFO_SU"},
    {"OvenRepair", Location::Deli, false, false, "DFO_BR"},
    {"Soap", Location::Deli, false, false, "DFO_HS"},
    {"ToiletPaper", Location::Deli, false, false, "DFO_TP"},
    {"Spouse", Location::Deli, true, false, "DFO_MA"},
    {"Father", Location::Deli, true, false, "DFO_FA"},
    {"Sandwich", Location::Deli, true, false, "DFO_SW"},
    {"WashHands", Location::Bathroom, false, false, "BFO_HA"},
    {"Cleaner", Location::Bathroom, false, false, "BFO_CL"},
    {"Vomit", Location::Bathroom, true, false, "BFO_TU"},
    {"GetJacket", Location::Bathroom, false, true, "BFO_JA"},
    {"Friend", Location::Bathroom, true, false, "BFO_FR"},
    {"Aid", Location::Bathroom, true, false, "BFO_EL"},
    {"UseBathroom", Location::Bathroom, true, false, "BFO_BR"},
    {"Departure20min", Location::Airport, true, false, "AFO_MN"},
    {"CryingBaby", Location::Airport, true, false, "AFO_BA"},
    {"ForgotJacket", Location::Airport, false, true, "AFO_JA"},
    {"CafeWorker", Location::Airport, false, false, "AFO_CA"},
    {"GoToBathroom", Location::Airport, true, true, "AFO_BR"},
    {"Departure3h", Location::Airport, true, false, "AFO_HR"},
}};

inline const ReasonInfo* find_reason(std::string_view label) {
  for (const auto& r : kReasons)
    if (r.label == label) return &r;
  return nullptr;
}

inline std::vector<const ReasonInfo*> reasons_at(Location l) {
  std::vector<const ReasonInfo*> out;
  for (const auto& r : kReasons)
    if (r.location == l) out.push_back(&r);
  return out;
}

/// The evaluation questions, in CSV column order.
inline constexpr std::size_t kEvalCount = 7;
inline constexpr std::array<std::string_view, kEvalCount> kEvalNames{
    "global_welfare", "first_person", "middle_person", "last_person", "cutter", "universalization", "likelihood"};
inline constexpr std::array<std::string_view, kEvalCount> kEvalTitles{
    "Global Welfare",      "First Person Welfare", "Middle Person Welfare", "Last Person Welfare",
    "Line Cutter Welfare", "Universalization",     "Likelihood"};
inline constexpr std::size_t kCutter = 4;
inline constexpr std::size_t kLikelihood = 6;

inline std::pair<int, int> eval_range(std::size_t ev) { return ev == kLikelihood ? std::pair{0, 100} : std::pair{-50, 50}; }

inline std::optional<std::size_t> eval_index(std::string_view name) {
  for (std::size_t i = 0; i < kEvalCount; ++i)
    if (kEvalNames[i] == name) return i;
  return std::nullopt;
}

struct SurveyRecord {
  std::string subject_id;
  OrderCondition order = OrderCondition::JudgeFirst;
  Location location = Location::Deli;
  std::string reason;
  bool main_service = false;
  bool already_waited = false;
  std::array<int, kEvalCount> evals{};
  /// true when the subject found cutting acceptable.
  bool judgment = false;

  friend bool operator==(const SurveyRecord&, const SurveyRecord&) = default;
};

inline constexpr std::string_view kSurveyHeader =
    "subject_id,order_condition,location,reason,main_service,already_waited,global_welfare,first_person,"
    "middle_person,last_person,cutter,universalization,likelihood,judgment";

struct RowDiagnostic {
  /// 1-based file line; the header is line 1.
  std::size_t line = 0;
  std::string column;
  std::string message;
};

/// Rejected survey input. Carries every problem found, not just the first.
class IngestError : public Error {
 public:
  explicit IngestError(std::vector<RowDiagnostic> diagnostics)
      : Error(describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<RowDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string describe(const std::vector<RowDiagnostic>& d) {
    std::string msg = std::to_string(d.size()) + " problem(s) in survey input";
    if (!d.empty()) msg += "; first at line " + std::to_string(d.front().line) + ": " + d.front().message;
    return msg;
  }
  std::vector<RowDiagnostic> diagnostics_;
};

namespace survey_detail {

inline std::optional<bool> parse_bool(std::string_view s) {
  if (s == "1" || s == "true" || s == "True") return true;
  if (s == "0" || s == "false" || s == "False") return false;
  return std::nullopt;
}

}  // namespace survey_detail

/// Parses survey CSV text. The header must match kSurveyHeader exactly.
/// Throws IngestError listing every bad row.
inline std::vector<SurveyRecord> ingest(std::string_view text) {
  std::vector<RowDiagnostic> diags;
  std::vector<SurveyRecord> out;
  auto lines = detail::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  if (lines.empty() || lines.front() != kSurveyHeader) {
    diags.push_back({1, "", "header must be '" + std::string(kSurveyHeader) + "'"});
    throw IngestError(std::move(diags));
  }
  const auto columns = detail::split(kSurveyHeader, ',');
  std::set<std::pair<std::string, std::string>> seen;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line = li + 1;
    if (detail::trim(lines[li]).empty()) continue;
    auto fields = detail::csv_split(lines[li]);
    if (fields.size() != columns.size()) {
      diags.push_back({line, "", "expected " + std::to_string(columns.size()) + " fields, found " +
                                     std::to_string(fields.size())});
      continue;
    }
    for (auto& f : fields) f = std::string(detail::trim(f));
    SurveyRecord r;
    bool ok = true;
    auto bad = [&](std::size_t col, std::string msg) {
      diags.push_back({line, columns[col], std::move(msg)});
      ok = false;
    };

    r.subject_id = fields[0];
    if (r.subject_id.empty()) bad(0, "empty subject id");
    if (auto c = parse_order_condition(fields[1]))
      r.order = *c;
    else
      bad(1, "'" + fields[1] + "' is not JudgeFirst or EvalFirst");
    auto loc = parse_location(fields[2]);
    if (loc)
      r.location = *loc;
    else
      bad(2, "'" + fields[2] + "' is not Deli, Bathroom or Airport");
    r.reason = fields[3];
    if (const auto* info = find_reason(fields[3])) {
      if (loc && info->location != *loc)
        bad(3, "reason '" + fields[3] + "' belongs to " + std::string(to_string(info->location)));
    } else {
      bad(3, "unknown reason '" + fields[3] + "'");
    }
    for (std::size_t col : {4u, 5u}) {
      auto b = survey_detail::parse_bool(fields[col]);
      if (!b) bad(col, "'" + fields[col] + "' is not a boolean");
      else (col == 4 ? r.main_service : r.already_waited) = *b;
    }
    for (std::size_t ev = 0; ev < kEvalCount; ++ev) {
      const std::size_t col = 6 + ev;
      auto v = detail::parse_integer(fields[col]);
      auto [lo, hi] = eval_range(ev);
      if (!v)
        bad(col, "'" + fields[col] + "' is not an integer");
      else if (*v < lo || *v > hi)
        bad(col, fields[col] + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      else
        r.evals[ev] = static_cast<int>(*v);
    }
    auto judgment = fields[13] == "yes" ? std::optional<bool>(true)
                    : fields[13] == "no" ? std::optional<bool>(false)
                                         : survey_detail::parse_bool(fields[13]);
    if (!judgment)
      bad(13, "'" + fields[13] + "' is not a judgment (0/1)");
    else
      r.judgment = *judgment;

    if (ok && !seen.insert({r.subject_id, r.reason}).second)
      bad(3, "subject '" + r.subject_id + "' answers reason '" + r.reason + "' twice");
    if (ok) out.push_back(std::move(r));
  }
  if (!diags.empty()) throw IngestError(std::move(diags));
  return out;
}

inline std::string to_csv(const std::vector<SurveyRecord>& records) {
  std::string out = std::string(kSurveyHeader) + "\n";
  for (const auto& r : records) {
    out += detail::csv_field(r.subject_id) + "," + std::string(to_string(r.order)) + "," +
           std::string(to_string(r.location)) + "," + detail::csv_field(r.reason) + "," + (r.main_service ? "1" : "0") +
           "," + (r.already_waited ? "1" : "0");
    for (int v : r.evals) out += "," + std::to_string(v);
    out += std::string(",") + (r.judgment ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace sepnet
