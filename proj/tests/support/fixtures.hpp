#pragma once

#include <string>

#include "rnimpute/dataset.hpp"
#include "rnimpute/random.hpp"

namespace rnimpute::testing {

inline std::string data_path(const std::string& name) {
  return std::string(RNIMPUTE_TEST_DATA_DIR) + "/" + name;
}

/// Toy T1: nominal {a,b}, real x, class {Y,N}.
inline Dataset toy_t1() {
  Schema s;
  s.relation = "t1";
  s.attributes = {AttributeSpec::nominal("c", {"a", "b"}), AttributeSpec::real("x"),
                  AttributeSpec::nominal("class", {"Y", "N"}, Role::kClass)};
  Dataset ds(s);
  const struct {
    std::size_t c;
    double x;
    std::size_t cls;
  } rows[] = {{0, 1.0, 0}, {0, 2.0, 0}, {0, 3.0, 0}, {1, 4.0, 0},
              {1, 10.0, 0}, {0, 1.5, 1}, {1, 2.5, 1}, {1, 3.5, 1}};
  for (const auto& r : rows) ds.add_row({Cell(Level{r.c}), Cell(r.x), Cell(Level{r.cls})});
  return ds;
}

struct RandomSpec {
  std::size_t min_records = 4;
  std::size_t max_records = 30;
  std::size_t max_inputs = 5;
  double missing_rate = 0.2;
  /// Keep at least one observed value per input column.
  bool keep_columns_observed = true;
};

/// Mixed nominal/integer/real inputs, 2-3 classes each present at least once,
/// numeric values drawn from a small grid so ties and duplicates occur.
inline Dataset random_dataset(std::uint64_t seed, const RandomSpec& spec = {}) {
  SeededRng rng(seed);
  const auto n = spec.min_records + rng.below(spec.max_records - spec.min_records + 1);
  const auto inputs = 1 + rng.below(spec.max_inputs);
  const auto classes = 2 + rng.below(2);

  Schema s;
  s.relation = "random" + std::to_string(seed);
  for (std::size_t j = 0; j < inputs; ++j) {
    const auto name = "a" + std::to_string(j);
    switch (rng.below(3)) {
      case 0: {
        std::vector<std::string> levels;
        for (std::size_t l = 0, m = 2 + rng.below(3); l < m; ++l)
          levels.push_back("v" + std::to_string(l));
        s.attributes.push_back(AttributeSpec::nominal(name, levels));
        break;
      }
      case 1:
        s.attributes.push_back(AttributeSpec::integer(name, -5, 20));
        break;
      default:
        s.attributes.push_back(AttributeSpec::real(name));
    }
  }
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  s.attributes.push_back(AttributeSpec::nominal("class", labels, Role::kClass));

  Dataset ds(s);
  for (std::size_t i = 0; i < n; ++i) {
    Row row;
    for (std::size_t j = 0; j < inputs; ++j) {
      const auto& a = s.attributes[j];
      if (a.is_nominal()) row.emplace_back(Level{rng.below(a.levels().size())});
      else if (a.is_integer()) row.emplace_back(static_cast<std::int64_t>(rng.below(26)) - 5);
      else row.emplace_back(static_cast<double>(rng.below(40)) * 0.25 - 3.0);
    }
    const auto cls = i < classes ? i : rng.below(classes);
    row.emplace_back(Level{cls});
    ds.add_row(std::move(row));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < inputs; ++j)
      if (rng.uniform() < spec.missing_rate) ds.set(i, j, Cell::missing());
  if (spec.keep_columns_observed)
    for (std::size_t j = 0; j < inputs; ++j) {
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) any = any || ds.at(i, j).is_observed();
      if (!any) {
        const auto& a = s.attributes[j];
        if (a.is_nominal()) ds.set(0, j, Cell(Level{0}));
        else if (a.is_integer()) ds.set(0, j, Cell(std::int64_t{3}));
        else ds.set(0, j, Cell(1.25));
      }
    }
  return ds;
}

/// Complete dataset whose class is a deterministic function of the inputs.
inline Dataset random_consistent_dataset(std::uint64_t seed, std::size_t max_records = 20) {
  RandomSpec spec;
  spec.max_records = max_records;
  spec.missing_rate = 0.0;
  auto ds = random_dataset(seed, spec);
  // First row seen with a given input vector fixes the class of its duplicates.
  for (std::size_t i = 0; i < ds.record_count(); ++i)
    for (std::size_t k = 0; k < i; ++k) {
      bool same = true;
      for (std::size_t j = 0; j < ds.schema().input_count(); ++j)
        same = same && ds.at(i, j) == ds.at(k, j);
      if (same) {
        Row r = ds.row(i);
        r.back() = ds.row(k).back();
        std::vector<Row> rows = ds.rows();
        rows[i] = r;
        ds = Dataset(ds.schema(), rows);
        break;
      }
    }
  return ds;
}

}  // namespace rnimpute::testing
