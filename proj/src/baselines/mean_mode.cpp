#include <algorithm>
#include <numeric>

#include "common.hpp"
#include "rnimpute/baselines.hpp"
#include "rnimpute/rni.hpp"

namespace rnimpute::baseline {
namespace detail {

std::vector<std::size_t> all_records(const Dataset& ds) {
  std::vector<std::size_t> idx(ds.record_count());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

Cell numeric_cell(const AttributeSpec& attr, double v) {
  if (const auto* ik = std::get_if<IntegerKind>(&attr.kind)) return Cell(rni::to_integer(v, *ik));
  return Cell(v);
}

std::optional<Cell> mean_or_mode(const Dataset& ds, std::size_t col,
                                 std::span<const std::size_t> records) {
  const auto& attr = ds.schema()[col];
  if (attr.is_nominal()) {
    std::vector<std::size_t> counts(attr.levels().size(), 0);
    bool any = false;
    for (auto i : records)
      if (const auto& c = ds.at(i, col); c.is_observed()) {
        ++counts[c.level().index];
        any = true;
      }
    if (!any) return std::nullopt;
    return Cell(Level{static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                               counts.begin())});
  }
  double sum = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  for (auto i : records)
    if (const auto& c = ds.at(i, col); c.is_observed()) {
      const double v = c.number();
      lo = n ? std::min(lo, v) : v;
      hi = n ? std::max(hi, v) : v;
      sum += v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  // The clamp absorbs summation rounding, e.g. (0.1 + 0.1 + 0.1) / 3 > 0.1.
  return numeric_cell(attr, std::clamp(sum / static_cast<double>(n), lo, hi));
}

std::optional<Cell> mean_or_mode(const Dataset& ds, std::size_t col) {
  return mean_or_mode(ds, col, all_records(ds));
}

}  // namespace detail

Dataset impute_mean_mode(const Dataset& ds) {
  Dataset out = ds;
  const auto& sch = ds.schema();
  for (std::size_t col = 0; col < sch.input_count(); ++col) {
    bool needed = false;
    for (std::size_t i = 0; i < ds.record_count() && !needed; ++i)
      needed = ds.at(i, col).is_missing();
    if (!needed) continue;
    const auto fill = detail::mean_or_mode(ds, col);
    if (!fill) throw DataError("column '" + sch[col].name + "' has no observed values");
    for (std::size_t i = 0; i < ds.record_count(); ++i)
      if (ds.at(i, col).is_missing()) out.set(i, col, *fill);
  }
  return out;
}

}  // namespace rnimpute::baseline
