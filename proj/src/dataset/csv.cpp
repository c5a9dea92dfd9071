#include <sstream>

#include "cell_text.hpp"
#include "rnimpute/dataset.hpp"
#include "text_util.hpp"

namespace rnimpute {

Dataset parse_csv_with_schema(std::istream& in, const Schema& schema) {
  Dataset ds(schema);
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::trim(raw).empty()) continue;
    const auto fields = detail::split(raw, ',');
    if (!header_seen) {
      if (fields.size() != schema.size())
        throw ParseError(line_no, "header has " + std::to_string(fields.size()) +
                                      " columns, schema has " + std::to_string(schema.size()));
      for (std::size_t j = 0; j < fields.size(); ++j) {
        const auto name = detail::unquote(detail::trim(fields[j]));
        if (name != schema[j].name)
          throw ParseError(line_no, "header column " + std::to_string(j + 1) + " is '" +
                                        std::string(name) + "', schema expects '" +
                                        schema[j].name + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != schema.size())
      throw ParseError(line_no, "row has " + std::to_string(fields.size()) +
                                    " fields, expected " + std::to_string(schema.size()));
    Row row;
    row.reserve(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto tok = detail::trim(fields[j]);
      row.push_back(tok.empty() ? Cell::missing() : detail::parse_cell(schema[j], tok, line_no));
    }
    try {
      ds.add_row(std::move(row));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!header_seen) throw ParseError(line_no, "CSV has no header row");
  return ds;
}

Dataset parse_csv_with_schema(std::string_view text, const Schema& schema) {
  std::istringstream in{std::string(text)};
  return parse_csv_with_schema(in, schema);
}

}  // namespace rnimpute
