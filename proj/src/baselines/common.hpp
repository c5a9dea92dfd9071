#pragma once

#include <optional>
#include <span>

#include "rnimpute/dataset.hpp"

namespace rnimpute::baseline::detail {

/// Mean or mode of `col` over the observed cells of `records`; nullopt when
/// none of them is observed. The overload without records uses every row.
std::optional<Cell> mean_or_mode(const Dataset& ds, std::size_t col,
                                 std::span<const std::size_t> records);
std::optional<Cell> mean_or_mode(const Dataset& ds, std::size_t col);

/// Wraps a real estimate into a cell of the column's kind.
Cell numeric_cell(const AttributeSpec& attr, double v);

std::vector<std::size_t> all_records(const Dataset& ds);

}  // namespace rnimpute::baseline::detail
