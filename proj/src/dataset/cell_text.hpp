#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "rnimpute/dataset.hpp"

namespace rnimpute::detail {

std::optional<double> parse_double(std::string_view tok);
std::optional<std::int64_t> parse_int(std::string_view tok);

/// Parses one field against its attribute; `?` is missing. Throws ParseError.
Cell parse_cell(const AttributeSpec& attr, std::string_view raw, std::size_t line);

}  // namespace rnimpute::detail
