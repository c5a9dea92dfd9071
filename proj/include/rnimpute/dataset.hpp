#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rnimpute {

/// Raised for malformed dataset text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a dataset value or argument breaks a documented contract.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NominalKind {
  std::vector<std::string> levels;
  bool operator==(const NominalKind&) const = default;
};

struct IntegerKind {
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;
  bool operator==(const IntegerKind&) const = default;
};

struct RealKind {
  std::optional<double> min;
  std::optional<double> max;
  bool operator==(const RealKind&) const = default;
};

using AttributeKind = std::variant<NominalKind, IntegerKind, RealKind>;

enum class Role { kInput, kClass };

struct AttributeSpec {
  std::string name;
  AttributeKind kind;
  Role role = Role::kInput;

  bool is_nominal() const { return std::holds_alternative<NominalKind>(kind); }
  bool is_integer() const { return std::holds_alternative<IntegerKind>(kind); }
  bool is_real() const { return std::holds_alternative<RealKind>(kind); }
  bool is_numeric() const { return !is_nominal(); }

  const std::vector<std::string>& levels() const;
  /// Index of `label` in the level list, or nullopt.
  std::optional<std::size_t> level_index(std::string_view label) const;

  static AttributeSpec nominal(std::string name, std::vector<std::string> levels,
                               Role role = Role::kInput);
  static AttributeSpec integer(std::string name,
                               std::optional<std::int64_t> min = std::nullopt,
                               std::optional<std::int64_t> max = std::nullopt);
  static AttributeSpec real(std::string name, std::optional<double> min = std::nullopt,
                            std::optional<double> max = std::nullopt);

  bool operator==(const AttributeSpec&) const = default;
};

/// Position of a label in a nominal attribute's level list.
struct Level {
  std::size_t index = 0;
  auto operator<=>(const Level&) const = default;
};

using Value = std::variant<Level, std::int64_t, double>;

/// An observed value or the missing marker.
class Cell {
 public:
  Cell() = default;
  Cell(Value v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static Cell missing() { return {}; }

  bool is_missing() const { return !value_.has_value(); }
  bool is_observed() const { return value_.has_value(); }
  const Value& value() const { return *value_; }

  Level level() const { return std::get<Level>(*value_); }
  /// Numeric view of an Integer or Real cell.
  double number() const;

  bool operator==(const Cell&) const = default;

 private:
  std::optional<Value> value_;
};

using Row = std::vector<Cell>;

struct Schema {
  std::string relation = "dataset";
  std::vector<AttributeSpec> attributes;

  std::size_t size() const { return attributes.size(); }
  std::size_t class_index() const { return attributes.size() - 1; }
  std::size_t input_count() const { return attributes.size() - 1; }
  const AttributeSpec& class_attribute() const { return attributes.back(); }
  const AttributeSpec& operator[](std::size_t i) const { return attributes[i]; }

  /// Checks the schema invariants: unique non-empty levels, exactly one class
  /// attribute in last position, class is nominal. Throws DataError.
  void validate() const;

  bool operator==(const Schema&) const = default;
};

/// Schema plus rows. Class cells are always observed.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Schema schema);
  Dataset(Schema schema, std::vector<Row> rows);

  const Schema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const Cell& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }

  std::size_t record_count() const { return rows_.size(); }
  std::size_t attribute_count() const { return schema_.size(); }
  std::size_t class_count() const { return schema_.class_attribute().levels().size(); }

  std::size_t class_of(std::size_t i) const { return rows_[i].back().level().index; }

  /// Validates and appends a row.
  void add_row(Row row);
  /// Replaces an input cell. The new value must satisfy the attribute's kind.
  void set(std::size_t i, std::size_t j, Cell cell);

  std::size_t missing_count() const;
  bool is_complete() const { return missing_count() == 0; }

  /// New dataset with the same schema and the given rows, in order.
  Dataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  void check_cell(std::size_t j, const Cell& cell) const;
  void check_row(const Row& row) const;

  Schema schema_;
  std::vector<Row> rows_;
};

/// Column tallies; attribute kinds count inputs only.
struct DatasetSummary {
  std::size_t real_attributes = 0;
  std::size_t integer_attributes = 0;
  std::size_t nominal_attributes = 0;
  std::size_t example_count = 0;
  std::size_t class_count = 0;
  double mv_percent = 0.0;
  double mv_example_percent = 0.0;

  std::size_t input_attributes() const {
    return real_attributes + integer_attributes + nominal_attributes;
  }
};

DatasetSummary summarize(const Dataset& ds);
std::string summary_to_json(const DatasetSummary& s, std::string_view name = {});

// Keel DAT
Dataset parse_keel_dat(std::istream& in);
Dataset parse_keel_dat(std::string_view text);
Dataset read_keel_dat_file(const std::string& path);
std::string write_keel_dat(const Dataset& ds);
void write_keel_dat_file(const Dataset& ds, const std::string& path);

// CSV with a header row matching the schema order. Empty field or `?` is missing.
Dataset parse_csv_with_schema(std::istream& in, const Schema& schema);
Dataset parse_csv_with_schema(std::string_view text, const Schema& schema);

/// Formats a number the way the writers do: shortest text that parses back
/// to the same double.
std::string format_number(double v);
std::string format_cell(const AttributeSpec& attr, const Cell& cell);

/// Masks each observed input cell independently with probability `rate`.
Dataset inject_mcar(const Dataset& ds, double rate, std::uint64_t seed);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // record -> fold

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Per-class shuffle followed by a round-robin deal that continues across
/// classes, so fold sizes stay balanced as well as per-class counts.
FoldPlan stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace rnimpute
