#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rnimpute/baselines.hpp"

namespace rnimpute::baseline {

void validate(const KnnParams& p) {
  if (p.k < 1) throw DataError("KNN neighbour count must be at least 1");
}

MixedDistance::MixedDistance(const Dataset& ds) : ds_(&ds) {
  const auto cols = ds.schema().input_count();
  min_.assign(cols, 0.0);
  range_.assign(cols, 0.0);
  for (std::size_t col = 0; col < cols; ++col) {
    if (ds.schema()[col].is_nominal()) continue;
    bool first = true;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& row : ds.rows()) {
      if (row[col].is_missing()) continue;
      const double v = row[col].number();
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
    min_[col] = lo;
    range_[col] = hi - lo;
  }
}

std::pair<double, std::size_t> MixedDistance::squared(std::size_t i, std::size_t k) const {
  const auto& sch = ds_->schema();
  double sum = 0.0;
  std::size_t shared = 0;
  for (std::size_t col = 0; col < sch.input_count(); ++col) {
    const auto& a = ds_->at(i, col);
    const auto& b = ds_->at(k, col);
    if (a.is_missing() || b.is_missing()) continue;
    ++shared;
    if (sch[col].is_nominal()) {
      sum += a.level() == b.level() ? 0.0 : 1.0;
    } else if (range_[col] > 0.0) {
      const double d = (a.number() - b.number()) / range_[col];
      sum += d * d;
    }
  }
  return {sum, shared};
}

namespace {

struct Neighbor {
  std::size_t record;
  double distance;
};

// The k nearest records with an observed value in `col`, ties by record index.
std::vector<Neighbor> nearest(const Dataset& ds, const MixedDistance& metric, std::size_t i,
                              std::size_t col, std::size_t k) {
  std::vector<Neighbor> all;
  for (std::size_t r = 0; r < ds.record_count(); ++r) {
    if (r == i || ds.at(r, col).is_missing()) continue;
    const auto [sq, shared] = metric.squared(i, r);
    if (shared == 0) continue;
    all.push_back({r, std::sqrt(sq)});
  }
  const auto keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      return a.distance != b.distance ? a.distance < b.distance
                                                      : a.record < b.record;
                    });
  all.resize(keep);
  return all;
}

// Keeps a mean inside the donors' value range despite rounding.
double clamp_to_values(const Dataset& ds, std::size_t col, const std::vector<Neighbor>& nn,
                       double v) {
  double lo = ds.at(nn.front().record, col).number();
  double hi = lo;
  for (const auto& n : nn) {
    lo = std::min(lo, ds.at(n.record, col).number());
    hi = std::max(hi, ds.at(n.record, col).number());
  }
  return std::clamp(v, lo, hi);
}

template <typename Estimate>
Dataset impute_by_neighbors(const Dataset& ds, const KnnParams& p, Estimate estimate) {
  validate(p);
  Dataset out = ds;
  const MixedDistance metric(ds);
  const auto cols = ds.schema().input_count();
  for (std::size_t i = 0; i < ds.record_count(); ++i)
    for (std::size_t col = 0; col < cols; ++col) {
      if (ds.at(i, col).is_observed()) continue;
      const auto nn = nearest(ds, metric, i, col, p.k);
      if (nn.empty()) {
        const auto fill = detail::mean_or_mode(ds, col);
        if (!fill)
          throw DataError("column '" + ds.schema()[col].name + "' has no observed values");
        out.set(i, col, *fill);
        continue;
      }
      out.set(i, col, estimate(ds.schema()[col], col, nn));
    }
  return out;
}

}  // namespace

Dataset impute_knn(const Dataset& ds, const KnnParams& p) {
  return impute_by_neighbors(ds, p, [&](const AttributeSpec& attr, std::size_t col,
                                        const std::vector<Neighbor>& nn) {
    if (attr.is_nominal()) {
      std::vector<std::size_t> counts(attr.levels().size(), 0);
      for (const auto& n : nn) ++counts[ds.at(n.record, col).level().index];
      return Cell(Level{static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin())});
    }
    double sum = 0.0;
    for (const auto& n : nn) sum += ds.at(n.record, col).number();
    return detail::numeric_cell(attr, clamp_to_values(ds, col, nn,
                                                      sum / static_cast<double>(nn.size())));
  });
}

Dataset impute_wknn(const Dataset& ds, const KnnParams& p) {
  return impute_by_neighbors(ds, p, [&](const AttributeSpec& attr, std::size_t col,
                                        const std::vector<Neighbor>& nn) {
    // Zero-distance neighbours are exact matches and outvote everything else.
    std::vector<Neighbor> exact;
    for (const auto& n : nn)
      if (n.distance == 0.0) exact.push_back(n);
    const auto& pool = exact.empty() ? nn : exact;
    const auto weight = [&](const Neighbor& n) { return exact.empty() ? 1.0 / n.distance : 1.0; };

    if (attr.is_nominal()) {
      std::vector<double> votes(attr.levels().size(), 0.0);
      for (const auto& n : pool) votes[ds.at(n.record, col).level().index] += weight(n);
      return Cell(Level{static_cast<std::size_t>(
          std::max_element(votes.begin(), votes.end()) - votes.begin())});
    }
    double total = 0.0;
    for (const auto& n : pool) total += weight(n);
    double v = 0.0;
    for (const auto& n : pool) v += weight(n) / total * ds.at(n.record, col).number();
    return detail::numeric_cell(attr, clamp_to_values(ds, col, pool, v));
  });
}

}  // namespace rnimpute::baseline
