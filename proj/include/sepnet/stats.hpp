#pragma once

// Rank tests, correlation, quartiles and medians used by the learner.
// All tests are two-sided.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sepnet/errors.hpp"
#include "sepnet/model.hpp"

namespace sepnet {

class StatsError : public Error {
 public:
  using Error::Error;
};

enum class TestKind { SignedRank, RankSum };
enum class PMethod { ExactEnumeration, NormalApprox };

inline std::string_view to_string(TestKind k) { return k == TestKind::SignedRank ? "signed-rank" : "rank-sum"; }
inline std::string_view to_string(PMethod m) { return m == PMethod::ExactEnumeration ? "exact" : "normal"; }

struct TestResult {
  TestKind kind = TestKind::SignedRank;
  /// W+ for the signed-rank test, U of the first sample for the rank-sum test.
  double statistic = 0.0;
  double p_value = 1.0;
  PMethod method = PMethod::ExactEnumeration;
  /// Signed-rank: pairs with a nonzero difference. Rank-sum: |x| + |y|.
  std::size_t n_effective = 0;
  bool reject = false;
  /// Set when every paired difference was zero.
  bool degenerate = false;
};

/// Auto picks exact enumeration below the thresholds documented per test.
enum class MethodChoice { Auto, Exact, Normal };

inline constexpr std::size_t kSignedRankExactMax = 25;
inline constexpr std::size_t kRankSumExactMax = 12;

namespace stats_detail {

inline void require_finite(const std::vector<double>& v, const char* what) {
  for (double d : v)
    if (!std::isfinite(d)) throw StatsError(std::string(what) + " contains a non-finite value");
}

/// Average ranks (1-based) doubled so ties stay integral, plus tie group sizes.
inline std::pair<std::vector<long long>, std::vector<std::size_t>> doubled_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<long long> ranks(v.size());
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // Positions i+1..j average to (i+1+j)/2; doubled that is i+1+j.
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = static_cast<long long>(i + 1 + j);
    ties.push_back(j - i);
    i = j;
  }
  return {ranks, ties};
}

inline double tie_sum(const std::vector<std::size_t>& ties) {
  double s = 0.0;
  for (auto t : ties) s += static_cast<double>(t) * t * t - static_cast<double>(t);
  return s;
}

inline double two_sided_normal(double deviation, double variance) {
  if (variance <= 0.0) return 1.0;
  double z = std::max(0.0, std::abs(deviation) - 0.5) / std::sqrt(variance);
  return std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
}

}  // namespace stats_detail

/// Wilcoxon signed-rank test on paired samples. Zero differences are dropped
/// and tied magnitudes share their average rank. Exact null distribution for
/// up to 25 nonzero pairs, normal approximation with tie and continuity
/// corrections beyond that.
inline TestResult signed_rank(const std::vector<double>& x, const std::vector<double>& y, double alpha,
                              MethodChoice choice = MethodChoice::Auto) {
  if (x.empty() || y.empty()) throw StatsError("signed-rank test needs nonempty samples");
  if (x.size() != y.size()) throw StatsError("signed-rank test needs samples of equal length");
  stats_detail::require_finite(x, "x");
  stats_detail::require_finite(y, "y");

  std::vector<double> mag;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    positive.push_back(d > 0);
  }
  TestResult r;
  r.kind = TestKind::SignedRank;
  r.n_effective = mag.size();
  if (mag.empty()) {
    r.p_value = 1.0;
    r.degenerate = true;
    r.reject = r.p_value < alpha;
    return r;
  }

  auto [ranks, ties] = stats_detail::doubled_ranks(mag);
  long long w2 = 0, total2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    total2 += ranks[i];
    if (positive[i]) w2 += ranks[i];
  }
  r.statistic = static_cast<double>(w2) / 2.0;
  const std::size_t n = mag.size();
  bool exact = choice == MethodChoice::Exact || (choice == MethodChoice::Auto && n <= kSignedRankExactMax);

  if (exact) {
    // Number of sign patterns per doubled positive-rank sum.
    std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
    count[0] = 1.0;
    long long reach = 0;
    for (auto rk : ranks) {
      for (long long s = reach; s >= 0; --s)
        if (count[s] != 0.0) count[s + rk] += count[s];
      reach += rk;
    }
    long long observed = std::llabs(2 * w2 - total2);
    double hits = 0.0;
    for (long long s = 0; s <= total2; ++s)
      if (std::llabs(2 * s - total2) >= observed) hits += count[s];
    r.p_value = std::min(1.0, std::ldexp(hits, -static_cast<int>(n)));
    r.method = PMethod::ExactEnumeration;
  } else {
    double nn = static_cast<double>(n);
    double mean = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - stats_detail::tie_sum(ties) / 48.0;
    r.p_value = stats_detail::two_sided_normal(r.statistic - mean, var);
    r.method = PMethod::NormalApprox;
  }
  r.reject = r.p_value < alpha;
  return r;
}

/// Wilcoxon rank-sum (Mann-Whitney U) test. Exact over all labelings of the
/// pooled midranks when |x| + |y| <= 12, tie-corrected normal approximation
/// with continuity correction otherwise.
inline TestResult rank_sum(const std::vector<double>& x, const std::vector<double>& y, double alpha,
                           MethodChoice choice = MethodChoice::Auto) {
  if (x.empty() || y.empty()) throw StatsError("rank-sum test needs two nonempty samples");
  stats_detail::require_finite(x, "x");
  stats_detail::require_finite(y, "y");
  std::vector<double> pooled = x;
  pooled.insert(pooled.end(), y.begin(), y.end());
  auto [ranks, ties] = stats_detail::doubled_ranks(pooled);
  const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;

  long long s2 = 0;
  for (std::size_t i = 0; i < n1; ++i) s2 += ranks[i];
  TestResult r;
  r.kind = TestKind::RankSum;
  r.n_effective = n;
  r.statistic = static_cast<double>(s2) / 2.0 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  bool exact = choice == MethodChoice::Exact || (choice == MethodChoice::Auto && n <= kRankSumExactMax);

  if (exact) {
    // count[k][s]: subsets of size k with doubled rank sum s.
    long long total2 = std::accumulate(ranks.begin(), ranks.end(), 0LL);
    std::vector<std::vector<double>> count(n1 + 1, std::vector<double>(static_cast<std::size_t>(total2) + 1, 0.0));
    count[0][0] = 1.0;
    long long reach = 0;
    for (auto rk : ranks) {
      for (std::size_t k = n1; k-- > 0;)
        for (long long s = reach; s >= 0; --s)
          if (count[k][s] != 0.0) count[k + 1][s + rk] += count[k][s];
      reach += rk;
    }
    const long long expected2 = static_cast<long long>(n1 * (n + 1));
    const long long observed = std::llabs(s2 - expected2);
    double hits = 0.0, all = 0.0;
    for (long long s = 0; s <= total2; ++s) {
      all += count[n1][s];
      if (std::llabs(s - expected2) >= observed) hits += count[n1][s];
    }
    r.p_value = std::min(1.0, hits / all);
    r.method = PMethod::ExactEnumeration;
  } else {
    double a = static_cast<double>(n1), b = static_cast<double>(n2), nn = static_cast<double>(n);
    double var = a * b / 12.0 * ((nn + 1.0) - stats_detail::tie_sum(ties) / (nn * (nn - 1.0)));
    r.p_value = stats_detail::two_sided_normal(r.statistic - a * b / 2.0, var);
    r.method = PMethod::NormalApprox;
  }
  r.reject = r.p_value < alpha;
  return r;
}

// ---------------------------------------------------------------------------
// Correlation

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

/// Symmetric correlation matrix. Entries involving a constant column are
/// undefined (NaN, defined=false) except the diagonal, which is always 1.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> defined;

  double at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

inline CorrelationMatrix pearson_matrix(const std::vector<NamedColumn>& columns) {
  CorrelationMatrix m;
  const std::size_t k = columns.size();
  if (k == 0) return m;
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns) {
    if (c.values.size() != rows)
      throw StatsError("column '" + c.name + "' has " + std::to_string(c.values.size()) + " rows, expected " +
                       std::to_string(rows));
    stats_detail::require_finite(c.values, c.name.c_str());
  }
  if (rows < 2) throw StatsError("correlation needs at least 2 rows");

  std::vector<std::vector<double>> centered(k);
  std::vector<double> norm(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& v = columns[c].values;
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(rows);
    centered[c].resize(rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      centered[c][r] = v[r] - mean;
      ss += centered[c][r] * centered[c][r];
    }
    norm[c] = std::sqrt(ss);
    m.names.push_back(columns[c].name);
  }
  m.values.assign(k, std::vector<double>(k, std::nan("")));
  m.defined.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    m.values[i][i] = 1.0;
    m.defined[i][i] = true;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (norm[i] == 0.0 || norm[j] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t r = 0; r < rows; ++r) dot += centered[i][r] * centered[j][r];
      double c = std::clamp(dot / (norm[i] * norm[j]), -1.0, 1.0);
      m.values[i][j] = m.values[j][i] = c;
      m.defined[i][j] = m.defined[j][i] = true;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Location summaries

inline double median(std::vector<double> values) {
  if (values.empty()) throw StatsError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

enum class QuartileMethod {
  /// Medians of the lower and upper halves; an odd middle element joins both halves.
  Tukey,
  /// Linear interpolation between order statistics at (n-1)p.
  Linear,
};

struct Quartiles {
  BucketBounds bounds{};
  /// Bucket index (0..3 for Q1..Q4) of every input value, in input order.
  std::vector<std::size_t> buckets;
};

inline BucketBounds quartile_bounds(std::vector<double> values, QuartileMethod method = QuartileMethod::Tukey) {
  if (values.empty()) throw StatsError("quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (method == QuartileMethod::Linear) {
    auto at = [&](double p) {
      double h = static_cast<double>(n - 1) * p;
      auto lo = static_cast<std::size_t>(std::floor(h));
      auto hi = std::min(lo + 1, n - 1);
      return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
  }
  const std::size_t half = (n + 1) / 2;
  std::vector<double> lower(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<double> upper(values.end() - static_cast<std::ptrdiff_t>(half), values.end());
  return {median(lower), median(values), median(upper)};
}

inline Quartiles quartile_buckets(const std::vector<double>& values, QuartileMethod method = QuartileMethod::Tukey) {
  Quartiles q;
  q.bounds = quartile_bounds(values, method);
  for (double v : values) q.buckets.push_back(bucket_of(v, q.bounds));
  return q;
}

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw StatsError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Population standard deviation.
inline double stddev(const std::vector<double>& values) {
  double m = mean(values), ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

}  // namespace sepnet
