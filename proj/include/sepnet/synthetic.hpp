#pragma once

// Synthetic survey generators for calibration, recovery and structure tests.
// Each subject sees every reason of one location, as in the original survey.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sepnet/survey.hpp"

namespace sepnet {

/// Response model. Evaluation answers are normal around
/// base + location shift + reason shift, rounded and clamped to range.
/// The judgment is Bernoulli with logit
///   intercept + location term + sum_k weight[k] * z_k,
/// where z_k is answer k standardized around its location mean.
struct SyntheticModel {
  std::array<double, kEvalCount> base{0, 0, 0, 0, 0, 0, 50};
  std::array<double, kEvalCount> sd{15, 15, 15, 15, 15, 15, 15};
  std::array<std::array<double, 3>, kEvalCount> location_shift{};
  std::array<std::array<double, 25>, kEvalCount> reason_shift{};
  double intercept = 0.0;
  std::array<double, 3> location_logit{};
  std::array<double, kEvalCount> weight{};
  /// Extra logit for EvalFirst answers, per reason (plants order effects).
  std::array<double, 25> eval_first_logit{};
};

struct SyntheticConfig {
  std::size_t subjects_per_location = 100;
  std::uint64_t seed = 1;
};

inline std::vector<SurveyRecord> generate_survey(const SyntheticModel& m, const SyntheticConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SurveyRecord> out;
  std::size_t subject = 0;
  for (std::size_t li = 0; li < kLocations.size(); ++li) {
    for (std::size_t s = 0; s < cfg.subjects_per_location; ++s, ++subject) {
      char id[16];
      std::snprintf(id, sizeof id, "s%04zu", subject + 1);
      OrderCondition order = s % 2 == 0 ? OrderCondition::JudgeFirst : OrderCondition::EvalFirst;
      for (std::size_t ri = 0; ri < kReasons.size(); ++ri) {
        const auto& info = kReasons[ri];
        if (info.location != kLocations[li]) continue;
        SurveyRecord r;
        r.subject_id = id;
        r.order = order;
        r.location = info.location;
        r.reason = std::string(info.label);
        r.main_service = info.main_service;
        r.already_waited = info.already_waited;
        double logit = m.intercept + m.location_logit[li];
        if (order == OrderCondition::EvalFirst) logit += m.eval_first_logit[ri];
        for (std::size_t k = 0; k < kEvalCount; ++k) {
          double mu = m.base[k] + m.location_shift[k][li] + m.reason_shift[k][ri];
          auto [lo, hi] = eval_range(k);
          double v = std::clamp(std::round(mu + m.sd[k] * normal(rng)), double(lo), double(hi));
          r.evals[k] = static_cast<int>(v);
          logit += m.weight[k] * (v - m.base[k] - m.location_shift[k][li]) / m.sd[k];
        }
        r.judgment = unit(rng) < 1.0 / (1.0 + std::exp(-logit));
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

/// Edges the model plants, as (source, target) variable names.
inline std::set<std::pair<std::string, std::string>> planted_edges(const SyntheticModel& m) {
  std::set<std::pair<std::string, std::string>> out;
  auto varies = [](const auto& a) { return std::any_of(a.begin(), a.end(), [&](double v) { return v != a.front(); }); };
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    const std::string name(kEvalNames[k]);
    if (varies(m.reason_shift[k])) out.insert({"reason", name});
    if (varies(m.location_shift[k])) out.insert({"location", name});
    if (m.weight[k] != 0.0) out.insert({name, "judgment"});
  }
  if (varies(m.location_logit)) out.insert({"location", "judgment"});
  return out;
}

/// No effects anywhere; judgment is a fair coin.
inline SyntheticModel null_model() { return {}; }

/// Likelihood answers at the Deli sit `shift` points higher; sd for every
/// evaluation is `sd`.
inline SyntheticModel planted_location_model(double shift = 30.0, double sd = 15.0) {
  SyntheticModel m;
  m.sd.fill(sd);
  m.location_shift[kLikelihood][0] = shift;
  return m;
}

/// Mimics the published structure: reasons move every evaluation except the
/// cutter's welfare; location moves last person, cutter and likelihood;
/// judgment depends on location (Airport only) and on every evaluation but
/// the cutter's. Reason shifts are symmetric within each location so they do
/// not masquerade as location effects.
inline SyntheticModel mimic_model() {
  SyntheticModel m;
  for (std::size_t k = 0; k < kEvalCount; ++k) {
    if (k == kCutter) continue;
    for (auto loc : kLocations) {
      auto rs = reasons_at(loc);
      const double n = static_cast<double>(rs.size());
      for (std::size_t j = 0; j < rs.size(); ++j) {
        auto ri = static_cast<std::size_t>(rs[j] - kReasons.data());
        // Evenly spaced, centered at zero; the step rotates with k so
        // evaluations do not share one reason ordering.
        std::size_t pos = (j + k) % rs.size();
        m.reason_shift[k][ri] = 24.0 * (static_cast<double>(pos) - (n - 1) / 2.0) / (n - 1);
      }
    }
  }
  // Deli, Bathroom, Airport.
  m.location_shift[3] = {12, -12, 0};
  m.location_shift[kCutter] = {12, -12, 0};
  m.location_shift[kLikelihood] = {15, -15, 0};
  m.location_logit = {0.0, 0.0, 1.5};
  m.intercept = -0.75;
  m.weight = {0.6, 0.6, 0.6, 0.6, 0.0, 0.6, 0.6};
  return m;
}

}  // namespace sepnet
