#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnimpute/dataset.hpp"

namespace rnimpute::baseline {

struct KnnParams {
  std::size_t k = 10;
};

struct KMeansParams {
  std::size_t k = 10;
  std::size_t max_iterations = 100;
  /// Stop once the summed centroid displacement drops to this value or below.
  double convergence_epsilon = 0.0;
};

struct FkmParams {
  std::size_t k = 3;
  double fuzzifier = 1.5;
  std::size_t max_iterations = 100;
  double convergence_epsilon = 0.0;
};

void validate(const KnnParams& p);
void validate(const KMeansParams& p);
void validate(const FkmParams& p);

/// Column mean (integers rounded half-up) or mode (first declared level wins ties).
Dataset impute_mean_mode(const Dataset& ds);

/// Mixed-type distance used by the neighbour and clustering imputers:
/// numeric differences scaled by the column's observed range, 0/1 mismatch for
/// nominal columns. Only columns observed in both records contribute.
class MixedDistance {
 public:
  explicit MixedDistance(const Dataset& ds);

  /// Squared distance and the number of shared columns.
  std::pair<double, std::size_t> squared(std::size_t i, std::size_t k) const;

  double range(std::size_t col) const { return range_[col]; }
  double min(std::size_t col) const { return min_[col]; }

 private:
  const Dataset* ds_;
  std::vector<double> min_;
  std::vector<double> range_;
};

Dataset impute_knn(const Dataset& ds, const KnnParams& p);
Dataset impute_wknn(const Dataset& ds, const KnnParams& p);

/// Records as complete points: numerics scaled to [0,1] with the column mean
/// standing in for missing values, nominal levels with the column mode
/// standing in.
class Embedding {
 public:
  explicit Embedding(const Dataset& ds);

  std::size_t size() const { return numeric_.size(); }
  std::size_t numeric_dims() const { return numeric_cols_.size(); }
  std::size_t nominal_dims() const { return nominal_cols_.size(); }
  const std::vector<double>& numeric(std::size_t i) const { return numeric_[i]; }
  const std::vector<std::size_t>& nominal(std::size_t i) const { return nominal_[i]; }
  const std::vector<std::size_t>& numeric_columns() const { return numeric_cols_; }
  const std::vector<std::size_t>& nominal_columns() const { return nominal_cols_; }
  std::size_t level_count(std::size_t nominal_dim) const { return level_counts_[nominal_dim]; }

  /// Scaled coordinate back to attribute units, clamped to the observed range.
  double denormalize(std::size_t numeric_dim, double v) const;

 private:
  std::vector<std::size_t> numeric_cols_;
  std::vector<std::size_t> nominal_cols_;
  std::vector<std::size_t> level_counts_;
  std::vector<double> min_;
  std::vector<double> range_;
  std::vector<std::vector<double>> numeric_;
  std::vector<std::vector<std::size_t>> nominal_;
};

struct Centroid {
  std::vector<double> numeric;
  std::vector<std::size_t> nominal;
};

double squared_distance(const Embedding& e, std::size_t i, const Centroid& c);

struct KMeansResult {
  std::vector<Centroid> centroids;
  std::vector<std::size_t> assignment;
  /// Total within-cluster squared dissimilarity after each assignment step.
  std::vector<double> dissimilarity;
  std::size_t iterations = 0;
};

KMeansResult kmeans_cluster(const Embedding& e, const KMeansParams& p, std::uint64_t seed);
Dataset impute_kmeans(const Dataset& ds, const KMeansParams& p, std::uint64_t seed);

/// Row-major records x clusters.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  MembershipMatrix(std::size_t records, std::size_t clusters)
      : clusters_(clusters), degrees_(records * clusters, 0.0) {}

  std::size_t records() const { return clusters_ ? degrees_.size() / clusters_ : 0; }
  std::size_t clusters() const { return clusters_; }
  double& operator()(std::size_t i, std::size_t c) { return degrees_[i * clusters_ + c]; }
  double operator()(std::size_t i, std::size_t c) const { return degrees_[i * clusters_ + c]; }
  std::span<const double> row(std::size_t i) const {
    return {degrees_.data() + i * clusters_, clusters_};
  }

 private:
  std::size_t clusters_ = 0;
  std::vector<double> degrees_;
};

struct FuzzyResult {
  MembershipMatrix membership;
  std::vector<Centroid> centroids;
  /// Objective sum u^m d^2 after each membership update.
  std::vector<double> objective;
  /// Largest |row sum - 1| seen at each membership update.
  std::vector<double> row_sum_error;
  std::size_t iterations = 0;
};

/// Membership of one point given its squared distances to the centroids. A
/// point that coincides with centroids shares membership among them evenly.
std::vector<double> fuzzy_memberships(std::span<const double> squared_distances, double m);

FuzzyResult fuzzy_cluster(const Embedding& e, const FkmParams& p, std::uint64_t seed);
Dataset impute_fuzzy_kmeans(const Dataset& ds, const FkmParams& p, std::uint64_t seed);

}  // namespace rnimpute::baseline
