#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. They share no code with src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rnimpute/dataset.hpp"

namespace rnimpute::oracle {

/// Exhaustive KNN imputation: all pairs, full sort, mean / mode of the k nearest.
inline Dataset knn(const Dataset& ds, std::size_t k) {
  const auto& sch = ds.schema();
  const auto cols = sch.input_count();
  const auto m = ds.record_count();

  std::vector<double> lo(cols, 0), range(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    if (sch[c].is_nominal()) continue;
    std::vector<double> v;
    for (std::size_t i = 0; i < m; ++i)
      if (ds.at(i, c).is_observed()) v.push_back(ds.at(i, c).number());
    if (v.empty()) continue;
    lo[c] = *std::min_element(v.begin(), v.end());
    range[c] = *std::max_element(v.begin(), v.end()) - lo[c];
  }

  // dist[i][r], nullopt when no column is shared.
  std::vector<std::vector<std::optional<double>>> dist(m, std::vector<std::optional<double>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < m; ++r) {
      double sq = 0;
      std::size_t shared = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        const auto& x = ds.at(i, c);
        const auto& y = ds.at(r, c);
        if (x.is_missing() || y.is_missing()) continue;
        ++shared;
        if (sch[c].is_nominal()) sq += x.level() == y.level() ? 0 : 1;
        else if (range[c] > 0) sq += std::pow((x.number() - y.number()) / range[c], 2);
      }
      if (shared) dist[i][r] = std::sqrt(sq);
    }

  auto round_int = [&](std::size_t c, double v) -> Cell {
    const auto* ik = std::get_if<IntegerKind>(&sch[c].kind);
    if (!ik) return Cell(v);
    auto r = static_cast<std::int64_t>(std::floor(v + 0.5));
    if (ik->min) r = std::max(r, *ik->min);
    if (ik->max) r = std::min(r, *ik->max);
    return Cell(r);
  };
  auto estimate = [&](std::size_t c, const std::vector<std::size_t>& from) -> Cell {
    if (sch[c].is_nominal()) {
      std::vector<std::size_t> n(sch[c].levels().size(), 0);
      for (auto r : from) ++n[ds.at(r, c).level().index];
      std::size_t best = 0;
      for (std::size_t l = 1; l < n.size(); ++l)
        if (n[l] > n[best]) best = l;
      return Cell(Level{best});
    }
    double s = 0, a = ds.at(from[0], c).number(), b = a;
    for (auto r : from) {
      const double v = ds.at(r, c).number();
      s += v;
      a = std::min(a, v);
      b = std::max(b, v);
    }
    return round_int(c, std::clamp(s / static_cast<double>(from.size()), a, b));
  };

  Dataset out = ds;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < cols; ++c) {
      if (ds.at(i, c).is_observed()) continue;
      std::vector<std::pair<double, std::size_t>> cand;
      for (std::size_t r = 0; r < m; ++r)
        if (r != i && ds.at(r, c).is_observed() && dist[i][r]) cand.emplace_back(*dist[i][r], r);
      std::sort(cand.begin(), cand.end());
      std::vector<std::size_t> chosen;
      for (std::size_t j = 0; j < cand.size() && j < k; ++j) chosen.push_back(cand[j].second);
      if (chosen.empty())
        for (std::size_t r = 0; r < m; ++r)
          if (ds.at(r, c).is_observed()) chosen.push_back(r);
      out.set(i, c, estimate(c, chosen));
    }
  return out;
}

/// Two-sided signed-rank p-value by walking all 2^n sign vectors.
/// `ranks` may hold mid-ranks; `statistic` is min(W+, W-).
inline double signed_rank_p(const std::vector<double>& ranks, double statistic) {
  const auto n = ranks.size();
  if (n == 0) return 1.0;
  double total = 0;
  for (double r : ranks) total += r;
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) w += ranks[j];
    if (std::min(w, total - w) <= statistic + 1e-9) ++hits;
  }
  return static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n));
}

/// Mid-ranks of |a - b| for nonzero differences, with the sign of each.
struct Ranked {
  std::vector<double> ranks;
  std::vector<int> sign;
};
inline Ranked rank_differences(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  Ranked out;
  for (double x : d) {
    double below = 0, equal = 0;
    for (double y : d) {
      if (std::fabs(y) < std::fabs(x)) ++below;
      if (std::fabs(y) == std::fabs(x)) ++equal;
    }
    out.ranks.push_back(below + (equal + 1) / 2);
    out.sign.push_back(x > 0 ? 1 : -1);
  }
  return out;
}

inline double log2_entropy(const std::map<std::size_t, double>& counts) {
  double n = 0;
  for (const auto& [_, c] : counts) n += c;
  double h = 0;
  for (const auto& [_, c] : counts)
    if (c > 0) h += -(c / n) * std::log(c / n) / std::log(2.0);
  return h;
}

/// Gain ratio of splitting `records` on `attr`. Numeric attributes take the
/// midpoint with the highest gain, first one on ties.
struct GainRatio {
  double gain = 0;
  double ratio = 0;
  std::optional<double> threshold;
};
inline std::optional<GainRatio> gain_ratio(const Dataset& ds, const std::vector<std::size_t>& records,
                                           std::size_t attr, std::size_t min_leaf) {
  std::map<std::size_t, double> all;
  for (auto i : records) all[ds.class_of(i)] += 1;
  const double n = static_cast<double>(records.size());
  const double h = log2_entropy(all);

  auto evaluate = [&](const std::vector<std::vector<std::size_t>>& groups) {
    double rem = 0, split = 0;
    for (const auto& g : groups) {
      if (g.empty()) continue;
      std::map<std::size_t, double> cc;
      for (auto i : g) cc[ds.class_of(i)] += 1;
      const double p = static_cast<double>(g.size()) / n;
      rem += p * log2_entropy(cc);
      split -= p * std::log(p) / std::log(2.0);
    }
    GainRatio r;
    r.gain = h - rem;
    r.ratio = split > 0 ? r.gain / split : 0;
    return r;
  };

  if (ds.schema()[attr].is_nominal()) {
    std::vector<std::vector<std::size_t>> groups(ds.schema()[attr].levels().size());
    for (auto i : records) groups[ds.at(i, attr).level().index].push_back(i);
    std::size_t big = 0;
    for (const auto& g : groups) big += g.size() >= min_leaf;
    if (big < 2) return std::nullopt;
    return evaluate(groups);
  }

  std::vector<double> values;
  for (auto i : records) values.push_back(ds.at(i, attr).number());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::optional<GainRatio> best;
  for (std::size_t j = 0; j + 1 < values.size(); ++j) {
    const double t = (values[j] + values[j + 1]) / 2;
    std::vector<std::vector<std::size_t>> groups(2);
    for (auto i : records) groups[ds.at(i, attr).number() <= values[j] ? 0 : 1].push_back(i);
    if (groups[0].size() < min_leaf || groups[1].size() < min_leaf) continue;
    auto r = evaluate(groups);
    r.threshold = t;
    if (!best || r.gain > best->gain + 1e-12) best = r;
  }
  return best;
}

}  // namespace rnimpute::oracle
