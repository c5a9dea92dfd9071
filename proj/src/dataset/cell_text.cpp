#include <charconv>
#include <cmath>
#include <system_error>

#include "cell_text.hpp"
#include "rnimpute/dataset.hpp"
#include "text_util.hpp"

namespace rnimpute {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_cell(const AttributeSpec& attr, const Cell& cell) {
  if (cell.is_missing()) return "?";
  const Value& v = cell.value();
  if (const auto* l = std::get_if<Level>(&v)) return attr.levels().at(l->index);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return format_number(std::get<double>(v));
}

namespace detail {

std::optional<double> parse_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  std::int64_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec == std::errc{} && res.ptr == tok.data() + tok.size()) return v;
  // Some repositories write integer columns as "3.0".
  const auto d = parse_double(tok);
  if (d && std::floor(*d) == *d && std::fabs(*d) < 9.0e15) return static_cast<std::int64_t>(*d);
  return std::nullopt;
}

Cell parse_cell(const AttributeSpec& attr, std::string_view raw, std::size_t line) {
  const auto tok = unquote(trim(raw));
  if (tok == "?") return Cell::missing();
  return std::visit(
      [&](const auto& kind) -> Cell {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, NominalKind>) {
          const auto idx = attr.level_index(tok);
          if (!idx)
            throw ParseError(line, "value '" + std::string(tok) + "' is not a level of '" +
                                       attr.name + "'");
          return Cell(Level{*idx});
        } else if constexpr (std::is_same_v<K, IntegerKind>) {
          const auto v = parse_int(tok);
          if (!v)
            throw ParseError(line, "cannot parse '" + std::string(tok) + "' as an integer for '" +
                                       attr.name + "'");
          return Cell(*v);
        } else {
          const auto v = parse_double(tok);
          if (!v)
            throw ParseError(line, "cannot parse '" + std::string(tok) + "' as a number for '" +
                                       attr.name + "'");
          return Cell(*v);
        }
      },
      attr.kind);
}

}  // namespace detail
}  // namespace rnimpute
