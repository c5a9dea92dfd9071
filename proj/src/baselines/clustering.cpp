#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "rnimpute/baselines.hpp"
#include "rnimpute/random.hpp"

namespace rnimpute::baseline {

void validate(const KMeansParams& p) {
  if (p.k < 1) throw DataError("cluster count must be at least 1");
  if (p.max_iterations < 1) throw DataError("max_iterations must be at least 1");
  if (!(p.convergence_epsilon >= 0.0)) throw DataError("convergence epsilon must be >= 0");
}

void validate(const FkmParams& p) {
  if (p.k < 1) throw DataError("cluster count must be at least 1");
  if (!(p.fuzzifier > 1.0)) throw DataError("fuzzifier m must exceed 1");
  if (p.max_iterations < 1) throw DataError("max_iterations must be at least 1");
  if (!(p.convergence_epsilon >= 0.0)) throw DataError("convergence epsilon must be >= 0");
}

Embedding::Embedding(const Dataset& ds) {
  const auto& sch = ds.schema();
  const auto m = ds.record_count();
  for (std::size_t col = 0; col < sch.input_count(); ++col)
    (sch[col].is_nominal() ? nominal_cols_ : numeric_cols_).push_back(col);

  std::vector<double> fill(numeric_cols_.size(), 0.0);
  for (std::size_t d = 0; d < numeric_cols_.size(); ++d) {
    const auto col = numeric_cols_[d];
    double lo = 0.0;
    double hi = 0.0;
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : ds.rows()) {
      if (row[col].is_missing()) continue;
      const double v = row[col].number();
      lo = n ? std::min(lo, v) : v;
      hi = n ? std::max(hi, v) : v;
      sum += v;
      ++n;
    }
    if (n == 0) throw DataError("column '" + sch[col].name + "' has no observed values");
    min_.push_back(lo);
    range_.push_back(hi - lo);
    fill[d] = range_[d] > 0.0 ? std::clamp((sum / static_cast<double>(n) - lo) / range_[d], 0.0, 1.0)
                              : 0.0;
  }
  std::vector<std::size_t> mode(nominal_cols_.size(), 0);
  for (std::size_t d = 0; d < nominal_cols_.size(); ++d) {
    const auto col = nominal_cols_[d];
    level_counts_.push_back(sch[col].levels().size());
    const auto fill_cell = detail::mean_or_mode(ds, col);
    if (!fill_cell) throw DataError("column '" + sch[col].name + "' has no observed values");
    mode[d] = fill_cell->level().index;
  }

  numeric_.assign(m, std::vector<double>(numeric_cols_.size()));
  nominal_.assign(m, std::vector<std::size_t>(nominal_cols_.size()));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t d = 0; d < numeric_cols_.size(); ++d) {
      const auto& c = ds.at(i, numeric_cols_[d]);
      numeric_[i][d] = c.is_missing() ? fill[d]
                       : range_[d] > 0.0 ? (c.number() - min_[d]) / range_[d]
                                         : 0.0;
    }
    for (std::size_t d = 0; d < nominal_cols_.size(); ++d) {
      const auto& c = ds.at(i, nominal_cols_[d]);
      nominal_[i][d] = c.is_missing() ? mode[d] : c.level().index;
    }
  }
}

double Embedding::denormalize(std::size_t numeric_dim, double v) const {
  const double lo = min_[numeric_dim];
  const double r = range_[numeric_dim];
  return std::clamp(lo + v * r, lo, lo + r);
}

double squared_distance(const Embedding& e, std::size_t i, const Centroid& c) {
  double sum = 0.0;
  const auto& x = e.numeric(i);
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - c.numeric[d];
    sum += diff * diff;
  }
  const auto& y = e.nominal(i);
  for (std::size_t d = 0; d < y.size(); ++d) sum += y[d] == c.nominal[d] ? 0.0 : 1.0;
  return sum;
}

namespace {

double centroid_shift(const std::vector<Centroid>& a, const std::vector<Centroid>& b) {
  double total = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    double sq = 0.0;
    for (std::size_t d = 0; d < a[c].numeric.size(); ++d) {
      const double diff = a[c].numeric[d] - b[c].numeric[d];
      sq += diff * diff;
    }
    for (std::size_t d = 0; d < a[c].nominal.size(); ++d)
      sq += a[c].nominal[d] == b[c].nominal[d] ? 0.0 : 1.0;
    total += std::sqrt(sq);
  }
  return total;
}

Centroid point(const Embedding& e, std::size_t i) { return {e.numeric(i), e.nominal(i)}; }

// k distinct records drawn with the seeded generator.
std::vector<Centroid> seed_centroids(const Embedding& e, std::size_t k, std::uint64_t seed) {
  if (k > e.size())
    throw DataError("cluster count " + std::to_string(k) + " exceeds record count " +
                    std::to_string(e.size()));
  std::vector<std::size_t> idx(e.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<Centroid> out;
  for (std::size_t c = 0; c < k; ++c) out.push_back(point(e, idx[c]));
  return out;
}

// Weighted mean for numeric coordinates, weighted mode for nominal ones.
// Returns false when all weights are zero.
bool weighted_centroid(const Embedding& e, std::span<const double> weights, Centroid& out) {
  double total = 0.0;
  std::vector<double> num(e.numeric_dims(), 0.0);
  std::vector<std::vector<double>> votes(e.nominal_dims());
  for (std::size_t d = 0; d < e.nominal_dims(); ++d) votes[d].assign(e.level_count(d), 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    total += w;
    for (std::size_t d = 0; d < num.size(); ++d) num[d] += w * e.numeric(i)[d];
    for (std::size_t d = 0; d < votes.size(); ++d) votes[d][e.nominal(i)[d]] += w;
  }
  if (total == 0.0) return false;
  for (std::size_t d = 0; d < num.size(); ++d) out.numeric[d] = std::clamp(num[d] / total, 0.0, 1.0);
  for (std::size_t d = 0; d < votes.size(); ++d)
    out.nominal[d] = static_cast<std::size_t>(
        std::max_element(votes[d].begin(), votes[d].end()) - votes[d].begin());
  return true;
}

std::size_t nearest_centroid(const Embedding& e, std::size_t i, const std::vector<Centroid>& cs,
                             double* best_sq = nullptr) {
  std::size_t best = 0;
  double best_d = squared_distance(e, i, cs[0]);
  for (std::size_t c = 1; c < cs.size(); ++c) {
    const double d = squared_distance(e, i, cs[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_sq) *best_sq = best_d;
  return best;
}

}  // namespace

KMeansResult kmeans_cluster(const Embedding& e, const KMeansParams& p, std::uint64_t seed) {
  validate(p);
  KMeansResult r;
  r.centroids = seed_centroids(e, p.k, seed);
  r.assignment.assign(e.size(), 0);
  std::vector<double> weights(e.size());

  for (r.iterations = 1; r.iterations <= p.max_iterations; ++r.iterations) {
    double total = 0.0;
    bool changed = r.iterations == 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      double sq = 0.0;
      const auto c = nearest_centroid(e, i, r.centroids, &sq);
      changed = changed || c != r.assignment[i];
      r.assignment[i] = c;
      total += sq;
    }
    r.dissimilarity.push_back(total);
    if (!changed) break;

    auto next = r.centroids;
    for (std::size_t c = 0; c < next.size(); ++c) {
      for (std::size_t i = 0; i < e.size(); ++i) weights[i] = r.assignment[i] == c ? 1.0 : 0.0;
      weighted_centroid(e, weights, next[c]);  // an empty cluster keeps its centroid
    }
    const double shift = centroid_shift(r.centroids, next);
    r.centroids = std::move(next);
    if (shift <= p.convergence_epsilon) {
      // Final assignment against the updated centroids.
      double t = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        double sq = 0.0;
        r.assignment[i] = nearest_centroid(e, i, r.centroids, &sq);
        t += sq;
      }
      r.dissimilarity.push_back(t);
      break;
    }
  }
  r.iterations = std::min(r.iterations, p.max_iterations);
  return r;
}

Dataset impute_kmeans(const Dataset& ds, const KMeansParams& p, std::uint64_t seed) {
  validate(p);
  if (p.k > ds.record_count())
    throw DataError("cluster count " + std::to_string(p.k) + " exceeds record count " +
                    std::to_string(ds.record_count()));
  Dataset out = ds;
  if (ds.is_complete()) return out;
  const Embedding e(ds);
  const auto clusters = kmeans_cluster(e, p, seed);

  std::vector<std::vector<std::size_t>> members(p.k);
  for (std::size_t i = 0; i < ds.record_count(); ++i)
    members[clusters.assignment[i]].push_back(i);

  const auto cols = ds.schema().input_count();
  for (std::size_t i = 0; i < ds.record_count(); ++i)
    for (std::size_t col = 0; col < cols; ++col) {
      if (ds.at(i, col).is_observed()) continue;
      auto fill = detail::mean_or_mode(ds, col, members[clusters.assignment[i]]);
      if (!fill) fill = detail::mean_or_mode(ds, col);
      out.set(i, col, *fill);
    }
  return out;
}

std::vector<double> fuzzy_memberships(std::span<const double> sq, double m) {
  std::vector<double> u(sq.size(), 0.0);
  std::size_t coincident = 0;
  for (double d : sq) coincident += d == 0.0 ? 1 : 0;
  if (coincident) {
    for (std::size_t c = 0; c < sq.size(); ++c)
      u[c] = sq[c] == 0.0 ? 1.0 / static_cast<double>(coincident) : 0.0;
    return u;
  }
  // u_c = 1 / sum_j (d_c / d_j)^(2/(m-1)); squared distances take exponent 1/(m-1).
  const double power = 1.0 / (m - 1.0);
  for (std::size_t c = 0; c < sq.size(); ++c) {
    double s = 0.0;
    for (std::size_t j = 0; j < sq.size(); ++j) s += std::pow(sq[c] / sq[j], power);
    u[c] = 1.0 / s;
  }
  return u;
}

FuzzyResult fuzzy_cluster(const Embedding& e, const FkmParams& p, std::uint64_t seed) {
  validate(p);
  FuzzyResult r;
  r.centroids = seed_centroids(e, p.k, seed);
  r.membership = MembershipMatrix(e.size(), p.k);
  std::vector<double> sq(p.k);

  const auto update_memberships = [&] {
    double objective = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t c = 0; c < p.k; ++c) sq[c] = squared_distance(e, i, r.centroids[c]);
      const auto u = fuzzy_memberships(sq, p.fuzzifier);
      double sum = 0.0;
      for (std::size_t c = 0; c < p.k; ++c) {
        r.membership(i, c) = u[c];
        sum += u[c];
        objective += std::pow(u[c], p.fuzzifier) * sq[c];
      }
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
    r.objective.push_back(objective);
    r.row_sum_error.push_back(worst);
  };

  update_memberships();
  std::vector<double> weights(e.size());
  for (r.iterations = 1; r.iterations <= p.max_iterations; ++r.iterations) {
    auto next = r.centroids;
    for (std::size_t c = 0; c < p.k; ++c) {
      for (std::size_t i = 0; i < e.size(); ++i)
        weights[i] = std::pow(r.membership(i, c), p.fuzzifier);
      weighted_centroid(e, weights, next[c]);
    }
    const double shift = centroid_shift(r.centroids, next);
    r.centroids = std::move(next);
    update_memberships();
    if (shift <= p.convergence_epsilon) break;
  }
  r.iterations = std::min(r.iterations, p.max_iterations);
  return r;
}

Dataset impute_fuzzy_kmeans(const Dataset& ds, const FkmParams& p, std::uint64_t seed) {
  validate(p);
  if (p.k > ds.record_count())
    throw DataError("cluster count " + std::to_string(p.k) + " exceeds record count " +
                    std::to_string(ds.record_count()));
  Dataset out = ds;
  if (ds.is_complete()) return out;
  const Embedding e(ds);
  const auto f = fuzzy_cluster(e, p, seed);
  const auto& sch = ds.schema();

  std::vector<std::size_t> dim_of(sch.input_count(), 0);
  for (std::size_t d = 0; d < e.numeric_dims(); ++d) dim_of[e.numeric_columns()[d]] = d;
  for (std::size_t d = 0; d < e.nominal_dims(); ++d) dim_of[e.nominal_columns()[d]] = d;

  for (std::size_t i = 0; i < ds.record_count(); ++i) {
    const auto u = f.membership.row(i);
    const auto top = static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
    const double norm = std::accumulate(u.begin(), u.end(), 0.0);
    for (std::size_t col = 0; col < sch.input_count(); ++col) {
      if (ds.at(i, col).is_observed()) continue;
      const auto d = dim_of[col];
      if (sch[col].is_nominal()) {
        out.set(i, col, Cell(Level{f.centroids[top].nominal[d]}));
        continue;
      }
      double v = 0.0;
      for (std::size_t c = 0; c < p.k; ++c) v += u[c] / norm * f.centroids[c].numeric[d];
      out.set(i, col, detail::numeric_cell(sch[col], e.denormalize(d, std::clamp(v, 0.0, 1.0))));
    }
  }
  return out;
}

}  // namespace rnimpute::baseline
