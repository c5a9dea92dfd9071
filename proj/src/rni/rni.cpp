#include "rnimpute/rni.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rnimpute::rni {

std::size_t ValueFrequencyTable::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double skewness(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  // Relative guard: constant columns accumulate rounding noise in m2.
  if (m2 <= 1e-24 * (mean * mean + 1.0)) return 0.0;
  const double g1 = m3 / std::pow(m2, 1.5);
  // Symmetric samples can leave a rounding residue whose sign would flip the tail.
  return std::fabs(g1) < 1e-10 ? 0.0 : g1;
}

NumericColumnStats::NumericColumnStats(std::vector<double> values, std::size_t class_label,
                                       std::size_t column)
    : values_(std::move(values)), class_label_(class_label), column_(column) {
  std::sort(values_.begin(), values_.end());
  skewness_ = rni::skewness(values_);
}

std::size_t NumericColumnStats::tail_count(double x) const {
  if (skewness_ >= 0.0)
    return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), x) -
                                    values_.begin());
  return static_cast<std::size_t>(values_.end() -
                                  std::lower_bound(values_.begin(), values_.end(), x));
}

double index_same_class_nominal(const ValueFrequencyTable& table, Level vi, Level vk,
                                bool same_record) {
  const auto gamma = table.total();
  if (gamma == 0) throw UninformativeColumn();
  if (same_record) return 0.0;
  const auto g = static_cast<double>(gamma);
  return std::min(static_cast<double>(table.count(vi)) / g,
                  static_cast<double>(table.count(vk)) / g);
}

double index_same_class_numeric(const NumericColumnStats& stats, double xi, double xk,
                                bool same_record) {
  if (stats.size() == 0) throw UninformativeColumn();
  if (same_record) return 0.0;
  const auto g = static_cast<double>(stats.size());
  return std::min(static_cast<double>(stats.tail_count(xi)) / g,
                  static_cast<double>(stats.tail_count(xk)) / g);
}

double index_cross_class_nominal(const CrossClassFrequency& freq, bool same_record) {
  const auto total = freq.beta + freq.delta;
  if (total == 0) throw UninformativeColumn();
  if (same_record) return 0.0;
  const auto t = static_cast<double>(total);
  return std::max(static_cast<double>(freq.beta) / t, static_cast<double>(freq.delta) / t);
}

double index_cross_class_numeric(const NumericColumnStats& p, const NumericColumnStats& q,
                                 double xi, double xk, bool same_record) {
  const auto lambda = p.size() + q.size();
  if (lambda == 0) throw UninformativeColumn();
  if (same_record) return 0.0;
  const auto l = static_cast<double>(lambda);
  return std::min(static_cast<double>(p.tail_count(xi)) / l,
                  static_cast<double>(q.tail_count(xk)) / l);
}

ClassConditionalStats::ClassConditionalStats(const Dataset& ds)
    : columns_(ds.schema().input_count()) {
  const auto& sch = ds.schema();
  const auto classes = ds.class_count();
  nominal_.resize(classes * columns_);
  numeric_.resize(classes * columns_);
  for (std::size_t col = 0; col < columns_; ++col) {
    if (sch[col].is_nominal()) {
      for (std::size_t c = 0; c < classes; ++c)
        nominal_[c * columns_ + col] = {c, col, std::vector<std::size_t>(sch[col].levels().size())};
      for (std::size_t i = 0; i < ds.record_count(); ++i)
        if (const auto& cell = ds.at(i, col); cell.is_observed())
          ++nominal_[ds.class_of(i) * columns_ + col].counts[cell.level().index];
    } else {
      std::vector<std::vector<double>> per_class(classes);
      for (std::size_t i = 0; i < ds.record_count(); ++i)
        if (const auto& cell = ds.at(i, col); cell.is_observed())
          per_class[ds.class_of(i)].push_back(cell.number());
      for (std::size_t c = 0; c < classes; ++c)
        numeric_[c * columns_ + col] = NumericColumnStats(std::move(per_class[c]), c, col);
    }
  }
}

const ValueFrequencyTable& ClassConditionalStats::nominal(std::size_t cls, std::size_t col) const {
  return nominal_.at(cls * columns_ + col);
}

const NumericColumnStats& ClassConditionalStats::numeric(std::size_t cls, std::size_t col) const {
  return numeric_.at(cls * columns_ + col);
}

std::optional<double> column_index(const Dataset& ds, const ClassConditionalStats& stats,
                                   std::size_t i, std::size_t k, std::size_t col) {
  const auto& a = ds.at(i, col);
  const auto& b = ds.at(k, col);
  if (a.is_missing() || b.is_missing()) return std::nullopt;
  const bool same = i == k;
  const auto ci = ds.class_of(i);
  const auto ck = ds.class_of(k);
  const bool nominal = ds.schema()[col].is_nominal();
  // Both cells are observed, so every table involved has at least one entry.
  if (ci == ck) {
    if (nominal) return index_same_class_nominal(stats.nominal(ci, col), a.level(), b.level(), same);
    return index_same_class_numeric(stats.numeric(ci, col), a.number(), b.number(), same);
  }
  if (nominal) {
    const CrossClassFrequency f{col, stats.nominal(ci, col).count(a.level()),
                                stats.nominal(ck, col).count(b.level())};
    return index_cross_class_nominal(f, same);
  }
  return index_cross_class_numeric(stats.numeric(ci, col), stats.numeric(ck, col), a.number(),
                                   b.number(), same);
}

PairIndex record_distance(const Dataset& ds, const ClassConditionalStats& stats, std::size_t i,
                          std::size_t k) {
  const auto cols = ds.schema().input_count();
  PairIndex p{i, k, std::vector<std::optional<double>>(cols), 0.0, 0};
  double sum = 0.0;
  for (std::size_t col = 0; col < cols; ++col) {
    p.per_column[col] = column_index(ds, stats, i, k, col);
    if (p.per_column[col]) {
      sum += *p.per_column[col];
      ++p.contributing;
    }
  }
  if (p.contributing == 0) throw IncomparablePair();
  p.distance = sum / static_cast<double>(p.contributing);
  return p;
}

PairIndex record_distance(const Dataset& ds, std::size_t i, std::size_t k) {
  return record_distance(ds, ClassConditionalStats(ds), i, k);
}

namespace {

double median_of_sorted(const std::vector<double>& v) {
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

NeighborSelection select_donors(std::vector<Candidate> distances) {
  if (distances.empty()) throw NoDonors();
  std::sort(distances.begin(), distances.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.record < b.record;
  });
  NeighborSelection sel;
  sel.distances = std::move(distances);

  std::vector<double> x;
  x.reserve(sel.distances.size());
  for (const auto& c : sel.distances) x.push_back(c.distance);
  sel.median = median_of_sorted(x);
  std::vector<double> dev;
  dev.reserve(x.size());
  for (double v : x) dev.push_back(std::fabs(v - sel.median));
  std::sort(dev.begin(), dev.end());
  sel.mad = median_of_sorted(dev);

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const auto& c : sel.distances) {
    double alpha;
    if (sel.mad > 0.0) alpha = (c.distance - sel.median) / sel.mad;
    else alpha = c.distance < sel.median ? -inf : (c.distance == sel.median ? 0.0 : inf);
    sel.alpha_scores.push_back(alpha);
    if (alpha <= 0.0) sel.donors.push_back(c.record);
  }
  return sel;
}

Level impute_nominal(std::span<const Level> donor_values) {
  if (donor_values.empty()) throw NoDonors();
  std::size_t levels = 0;
  for (auto v : donor_values) levels = std::max(levels, v.index + 1);
  std::vector<std::size_t> counts(levels, 0);
  for (auto v : donor_values) ++counts[v.index];
  // max_element returns the first maximum, i.e. the earliest declared level.
  return Level{static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                        counts.begin())};
}

ImputationWeights ImputationWeights::from(std::vector<double> distances,
                                          std::vector<double> values) {
  if (distances.size() != values.size())
    throw std::invalid_argument("donor distances and values differ in length");
  if (distances.empty()) throw NoDonors();
  ImputationWeights w{std::move(distances), {}, {}, std::move(values)};
  const bool exact_match = std::any_of(w.donor_distances.begin(), w.donor_distances.end(),
                                       [](double d) { return d == 0.0; });
  if (exact_match) return w;
  double total = 0.0;
  for (double d : w.donor_distances) {
    w.reciprocals.push_back(1.0 / d);
    total += w.reciprocals.back();
  }
  for (double b : w.reciprocals) w.weights.push_back(b / total);
  return w;
}

double impute_numeric(const ImputationWeights& w) {
  if (w.gamma() == 0) throw NoDonors();
  if (w.weights.empty()) {
    // Exact-match override: average the zero-distance donors.
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < w.gamma(); ++j)
      if (w.donor_distances[j] == 0.0) {
        sum += w.donor_values[j];
        ++n;
      }
    return sum / static_cast<double>(n);
  }
  double v = 0.0;
  for (std::size_t j = 0; j < w.gamma(); ++j) v += w.weights[j] * w.donor_values[j];
  // A convex combination; the clamp only removes rounding overshoot.
  const auto [lo, hi] = std::minmax_element(w.donor_values.begin(), w.donor_values.end());
  return std::clamp(v, *lo, *hi);
}

std::int64_t to_integer(double v, const IntegerKind& kind) {
  auto r = static_cast<std::int64_t>(std::floor(v + 0.5));
  if (kind.min) r = std::max(r, *kind.min);
  if (kind.max) r = std::min(r, *kind.max);
  return r;
}

namespace {

// Fallback when a target has no comparable donor: column mean or mode over
// all observed cells of the input.
Cell column_fallback(const Dataset& ds, std::size_t col) {
  const auto& attr = ds.schema()[col];
  std::vector<Level> levels;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t n = 0;
  for (const auto& row : ds.rows()) {
    if (row[col].is_missing()) continue;
    if (attr.is_nominal()) {
      levels.push_back(row[col].level());
    } else {
      sum += row[col].number();
      lo = std::min(lo, row[col].number());
      hi = std::max(hi, row[col].number());
    }
    ++n;
  }
  if (n == 0) throw DataError("column '" + attr.name + "' has no observed values");
  if (attr.is_nominal()) return Cell(impute_nominal(levels));
  const double mean = std::clamp(sum / static_cast<double>(n), lo, hi);
  if (const auto* ik = std::get_if<IntegerKind>(&attr.kind)) return Cell(to_integer(mean, *ik));
  return Cell(mean);
}

}  // namespace

Dataset impute_dataset_rnii(const Dataset& ds) {
  Dataset out = ds;
  if (ds.is_complete()) return out;
  const ClassConditionalStats stats(ds);
  const auto& sch = ds.schema();
  const auto cols = sch.input_count();
  const auto m = ds.record_count();

  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = ds.row(i);
    if (std::none_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(cols),
                     [](const Cell& c) { return c.is_missing(); }))
      continue;

    // Distances from record i to every comparable record; the target column
    // drops out on its own because it is missing in i.
    std::vector<std::optional<double>> dist(m);
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      double sum = 0.0;
      std::size_t used = 0;
      for (std::size_t col = 0; col < cols; ++col)
        if (const auto idx = column_index(ds, stats, i, k, col)) {
          sum += *idx;
          ++used;
        }
      if (used) dist[k] = sum / static_cast<double>(used);
    }

    for (std::size_t col = 0; col < cols; ++col) {
      if (row[col].is_observed()) continue;
      std::vector<Candidate> candidates;
      for (std::size_t k = 0; k < m; ++k)
        if (dist[k] && ds.at(k, col).is_observed()) candidates.push_back({k, *dist[k]});
      if (candidates.empty()) {
        out.set(i, col, column_fallback(ds, col));
        continue;
      }
      const auto sel = select_donors(std::move(candidates));
      const auto& attr = sch[col];
      if (attr.is_nominal()) {
        std::vector<Level> values;
        for (auto k : sel.donors) values.push_back(ds.at(k, col).level());
        out.set(i, col, Cell(impute_nominal(values)));
        continue;
      }
      std::vector<double> d;
      std::vector<double> v;
      for (std::size_t j = 0; j < sel.donors.size(); ++j) {
        d.push_back(sel.distances[j].distance);
        v.push_back(ds.at(sel.donors[j], col).number());
      }
      const double value = impute_numeric(ImputationWeights::from(std::move(d), std::move(v)));
      if (const auto* ik = std::get_if<IntegerKind>(&attr.kind))
        out.set(i, col, Cell(to_integer(value, *ik)));
      else
        out.set(i, col, Cell(value));
    }
  }
  return out;
}

}  // namespace rnimpute::rni
