#include "rnimpute/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rnimpute {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

const std::vector<std::string>& AttributeSpec::levels() const {
  if (const auto* n = std::get_if<NominalKind>(&kind)) return n->levels;
  throw DataError("attribute '" + name + "' is not nominal");
}

std::optional<std::size_t> AttributeSpec::level_index(std::string_view label) const {
  const auto& lv = levels();
  const auto it = std::find(lv.begin(), lv.end(), label);
  if (it == lv.end()) return std::nullopt;
  return static_cast<std::size_t>(it - lv.begin());
}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> levels,
                                     Role role) {
  return {std::move(name), NominalKind{std::move(levels)}, role};
}

AttributeSpec AttributeSpec::integer(std::string name, std::optional<std::int64_t> min,
                                     std::optional<std::int64_t> max) {
  return {std::move(name), IntegerKind{min, max}, Role::kInput};
}

AttributeSpec AttributeSpec::real(std::string name, std::optional<double> min,
                                  std::optional<double> max) {
  return {std::move(name), RealKind{min, max}, Role::kInput};
}

double Cell::number() const {
  if (const auto* i = std::get_if<std::int64_t>(&*value_)) return static_cast<double>(*i);
  return std::get<double>(*value_);
}

void Schema::validate() const {
  if (attributes.empty()) throw DataError("schema has no attributes");
  std::set<std::string> names;
  for (std::size_t j = 0; j < attributes.size(); ++j) {
    const auto& a = attributes[j];
    if (!names.insert(a.name).second) throw DataError("duplicate attribute '" + a.name + "'");
    if (a.is_nominal()) {
      std::set<std::string_view> seen;
      for (const auto& l : a.levels()) {
        if (l.empty()) throw DataError("attribute '" + a.name + "' has an empty level");
        if (!seen.insert(l).second)
          throw DataError("attribute '" + a.name + "' repeats level '" + l + "'");
      }
    }
    const bool last = j + 1 == attributes.size();
    if (last != (a.role == Role::kClass))
      throw DataError("the class attribute must be the last attribute");
  }
  const auto& cls = attributes.back();
  if (!cls.is_nominal()) throw DataError("class attribute '" + cls.name + "' must be nominal");
  if (cls.levels().empty()) throw DataError("class attribute has no levels");
}

Dataset::Dataset(Schema schema) : schema_(std::move(schema)) { schema_.validate(); }

Dataset::Dataset(Schema schema, std::vector<Row> rows) : Dataset(std::move(schema)) {
  rows_.reserve(rows.size());
  for (auto& r : rows) add_row(std::move(r));
}

void Dataset::check_cell(std::size_t j, const Cell& cell) const {
  const auto& a = schema_[j];
  if (cell.is_missing()) {
    if (a.role == Role::kClass) throw DataError("class value is missing");
    return;
  }
  const Value& v = cell.value();
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, NominalKind>) {
          const auto* l = std::get_if<Level>(&v);
          if (!l || l->index >= kind.levels.size())
            throw DataError("attribute '" + a.name + "' expects a declared level");
        } else if constexpr (std::is_same_v<K, IntegerKind>) {
          const auto* x = std::get_if<std::int64_t>(&v);
          if (!x) throw DataError("attribute '" + a.name + "' expects an integer");
          if ((kind.min && *x < *kind.min) || (kind.max && *x > *kind.max))
            throw DataError("value " + std::to_string(*x) + " outside the range of '" + a.name +
                            "'");
        } else {
          const auto* x = std::get_if<double>(&v);
          if (!x || !std::isfinite(*x))
            throw DataError("attribute '" + a.name + "' expects a finite real");
          if ((kind.min && *x < *kind.min) || (kind.max && *x > *kind.max))
            throw DataError("value " + format_number(*x) + " outside the range of '" + a.name +
                            "'");
        }
      },
      a.kind);
}

void Dataset::check_row(const Row& row) const {
  if (row.size() != schema_.size())
    throw DataError("row has " + std::to_string(row.size()) + " cells, schema has " +
                    std::to_string(schema_.size()));
  for (std::size_t j = 0; j < row.size(); ++j) check_cell(j, row[j]);
}

void Dataset::add_row(Row row) {
  check_row(row);
  rows_.push_back(std::move(row));
}

void Dataset::set(std::size_t i, std::size_t j, Cell cell) {
  check_cell(j, cell);
  rows_.at(i).at(j) = std::move(cell);
}

std::size_t Dataset::missing_count() const {
  std::size_t n = 0;
  for (const auto& r : rows_)
    n += static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](const Cell& c) {
      return c.is_missing();
    }));
  return n;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(schema_);
  out.rows_.reserve(indices.size());
  for (auto i : indices) out.rows_.push_back(rows_.at(i));
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

}  // namespace rnimpute
