#pragma once

// Index-based imputation (RNI-II).
//
// Two records are compared column by column with a class-conditional index in
// [0, 1]. Four cases exist, keyed on whether the records share a decision
// class and whether the column is nominal or numeric. The record distance is
// the mean index over columns observed in both records; smaller is closer.
// For each missing cell the candidate distances are scored with
// alpha = (x - median) / MAD and every candidate with alpha <= 0 donates:
// the modal level for nominal targets, an inverse-distance weighted mean for
// numeric ones.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rnimpute/dataset.hpp"

namespace rnimpute::rni {

/// The column carries no observed values for the records being compared.
class UninformativeColumn : public std::runtime_error {
 public:
  UninformativeColumn() : std::runtime_error("column uninformative") {}
};

/// Two records share no observed input column.
class IncomparablePair : public std::runtime_error {
 public:
  IncomparablePair() : std::runtime_error("incomparable pair") {}
};

class NoDonors : public std::runtime_error {
 public:
  NoDonors() : std::runtime_error("no donors") {}
};

/// Level counts of one column within one decision class.
struct ValueFrequencyTable {
  std::size_t class_label = 0;
  std::size_t column = 0;
  std::vector<std::size_t> counts;  // indexed by level

  std::size_t total() const;
  std::size_t count(Level v) const { return v.index < counts.size() ? counts[v.index] : 0; }
};

/// Population skewness g1 = m3 / m2^1.5; 0 when the values are constant or empty.
double skewness(std::span<const double> values);

/// Sorted observed numerics of one column within one class.
class NumericColumnStats {
 public:
  NumericColumnStats() = default;
  explicit NumericColumnStats(std::vector<double> values, std::size_t class_label = 0,
                              std::size_t column = 0);

  const std::vector<double>& values() const { return values_; }
  double skewness() const { return skewness_; }
  std::size_t size() const { return values_.size(); }
  std::size_t class_label() const { return class_label_; }
  std::size_t column() const { return column_; }

  /// Tail mass at x: count of values <= x when skewness >= 0, else values >= x.
  std::size_t tail_count(double x) const;

 private:
  std::vector<double> values_;
  double skewness_ = 0.0;
  std::size_t class_label_ = 0;
  std::size_t column_ = 0;
};

/// Level cardinalities for the cross-class nominal case: `beta` counts the
/// first record's value inside its class, `delta` the second record's value
/// inside its class.
struct CrossClassFrequency {
  std::size_t column = 0;
  std::size_t beta = 0;
  std::size_t delta = 0;
};

double index_same_class_nominal(const ValueFrequencyTable& table, Level vi, Level vk,
                                bool same_record);
double index_same_class_numeric(const NumericColumnStats& stats, double xi, double xk,
                                bool same_record);
double index_cross_class_nominal(const CrossClassFrequency& freq, bool same_record = false);
/// `p` holds the column for the first record's class, `q` for the second's.
double index_cross_class_numeric(const NumericColumnStats& p, const NumericColumnStats& q,
                                 double xi, double xk, bool same_record = false);

/// Per-class, per-column tables for a dataset, built from observed cells only.
class ClassConditionalStats {
 public:
  explicit ClassConditionalStats(const Dataset& ds);

  const ValueFrequencyTable& nominal(std::size_t cls, std::size_t col) const;
  const NumericColumnStats& numeric(std::size_t cls, std::size_t col) const;

 private:
  std::size_t columns_ = 0;
  std::vector<ValueFrequencyTable> nominal_;  // [cls * columns + col]
  std::vector<NumericColumnStats> numeric_;
};

struct PairIndex {
  std::size_t record_i = 0;
  std::size_t record_k = 0;
  std::vector<std::optional<double>> per_column;  // empty for skipped columns
  double distance = 0.0;
  std::size_t contributing = 0;
};

/// Index of one input column, or nullopt when a cell is missing or the
/// column is uninformative for the pair.
std::optional<double> column_index(const Dataset& ds, const ClassConditionalStats& stats,
                                   std::size_t i, std::size_t k, std::size_t col);

PairIndex record_distance(const Dataset& ds, const ClassConditionalStats& stats, std::size_t i,
                          std::size_t k);
/// Convenience overload that builds the statistics from `ds`.
PairIndex record_distance(const Dataset& ds, std::size_t i, std::size_t k);

struct Candidate {
  std::size_t record = 0;
  double distance = 0.0;
};

struct NeighborSelection {
  std::optional<std::size_t> target_record;
  std::vector<Candidate> distances;  // ascending
  double median = 0.0;
  double mad = 0.0;
  std::vector<double> alpha_scores;  // parallel to `distances`
  std::vector<std::size_t> donors;   // record indices, ascending distance
};

/// Sorts by (distance, record) and keeps every candidate with alpha <= 0.
/// With MAD = 0 alpha is taken in the limit: -inf below the median, 0 at it,
/// +inf above.
NeighborSelection select_donors(std::vector<Candidate> distances);

/// Modal level; ties go to the level declared first.
Level impute_nominal(std::span<const Level> donor_values);

struct ImputationWeights {
  std::vector<double> donor_distances;
  std::vector<double> reciprocals;
  std::vector<double> weights;
  std::vector<double> donor_values;

  std::size_t gamma() const { return donor_distances.size(); }

  /// Computes reciprocals and normalized weights. Zero-distance donors yield
  /// empty reciprocals/weights; impute_numeric then averages those donors.
  static ImputationWeights from(std::vector<double> distances, std::vector<double> values);
};

double impute_numeric(const ImputationWeights& w);

/// Rounds half-up and clamps to the attribute's declared bounds.
std::int64_t to_integer(double v, const IntegerKind& kind);

/// Fills every missing input cell. Donor values and statistics come from the
/// input's observed cells only, so cells can be imputed in any order.
Dataset impute_dataset_rnii(const Dataset& ds);

}  // namespace rnimpute::rni
