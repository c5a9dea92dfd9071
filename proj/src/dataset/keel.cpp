// Keel DAT reader and writer.
//
//   @relation iris
//   @attribute SepalLength real [4.3, 7.9]
//   @attribute Class {Iris-setosa, Iris-versicolor, Iris-virginica}
//   @inputs SepalLength
//   @outputs Class
//   @data
//   5.1, Iris-setosa
//
// `?` marks a missing value. Keywords are case-insensitive.

#include <fstream>
#include <sstream>

#include "cell_text.hpp"
#include "rnimpute/dataset.hpp"
#include "text_util.hpp"

namespace rnimpute {
namespace {

using detail::lower;
using detail::split;
using detail::trim;
using detail::unquote;

// Splits "@keyword rest" into the lowercased keyword and the trimmed rest.
std::pair<std::string, std::string_view> keyword(std::string_view line) {
  std::size_t end = 1;
  while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '{')
    ++end;
  return {lower(line.substr(0, end)), trim(line.substr(end))};
}

// Reads the attribute name, which may be quoted, and returns the remainder.
std::pair<std::string, std::string_view> attribute_name(std::string_view rest,
                                                        std::size_t line_no) {
  if (rest.empty()) throw ParseError(line_no, "@attribute without a name");
  if (rest.front() == '\'' || rest.front() == '"') {
    const auto close = rest.find(rest.front(), 1);
    if (close == std::string_view::npos) throw ParseError(line_no, "unterminated quoted name");
    return {std::string(rest.substr(1, close - 1)), trim(rest.substr(close + 1))};
  }
  std::size_t end = 0;
  while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t' && rest[end] != '{' &&
         rest[end] != '[')
    ++end;
  return {std::string(rest.substr(0, end)), trim(rest.substr(end))};
}

// Parses "[lo, hi]" into a pair of tokens; empty optional when absent.
std::optional<std::pair<std::string_view, std::string_view>> range(std::string_view s,
                                                                   std::size_t line_no) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() != '[' || s.back() != ']')
    throw ParseError(line_no, "expected a [min, max] range, got '" + std::string(s) + "'");
  const auto parts = split(s.substr(1, s.size() - 2), ',');
  if (parts.size() != 2) throw ParseError(line_no, "range needs exactly two bounds");
  return std::make_pair(trim(parts[0]), trim(parts[1]));
}

AttributeSpec parse_attribute(std::string_view rest, std::size_t line_no) {
  auto [name, type] = attribute_name(rest, line_no);
  if (name.empty()) throw ParseError(line_no, "@attribute without a name");
  if (type.empty()) throw ParseError(line_no, "attribute '" + name + "' has no type");

  if (type.front() == '{') {
    if (type.back() != '}') throw ParseError(line_no, "unterminated level list");
    std::vector<std::string> levels;
    for (auto tok : split(type.substr(1, type.size() - 2), ','))
      levels.emplace_back(unquote(trim(tok)));
    return AttributeSpec::nominal(std::move(name), std::move(levels));
  }

  std::size_t word_end = 0;
  while (word_end < type.size() && std::isalpha(static_cast<unsigned char>(type[word_end])))
    ++word_end;
  const auto word = lower(type.substr(0, word_end));
  const auto bounds = range(type.substr(word_end), line_no);

  if (word == "integer") {
    IntegerKind k;
    if (bounds) {
      k.min = detail::parse_int(bounds->first);
      k.max = detail::parse_int(bounds->second);
      if (!k.min || !k.max) throw ParseError(line_no, "bad integer range for '" + name + "'");
    }
    return {std::move(name), k, Role::kInput};
  }
  if (word == "real" || word == "numeric") {
    RealKind k;
    if (bounds) {
      k.min = detail::parse_double(bounds->first);
      k.max = detail::parse_double(bounds->second);
      if (!k.min || !k.max) throw ParseError(line_no, "bad real range for '" + name + "'");
    }
    return {std::move(name), k, Role::kInput};
  }
  throw ParseError(line_no, "unknown attribute type '" + std::string(type) + "'");
}

std::vector<std::string> name_list(std::string_view rest) {
  std::vector<std::string> out;
  for (auto tok : split(rest, ',')) {
    const auto t = unquote(trim(tok));
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(" \t,{}[]'\"%") != std::string_view::npos;
}

std::string quoted(std::string_view s) {
  return needs_quotes(s) ? "'" + std::string(s) + "'" : std::string(s);
}

}  // namespace

Dataset parse_keel_dat(std::istream& in) {
  Schema schema;
  std::vector<std::string> outputs;
  std::vector<std::string> inputs;
  std::size_t outputs_line = 0;
  bool in_data = false;
  std::optional<Dataset> ds;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (line.front() != '@') throw ParseError(line_no, "expected a header line starting with '@'");
      const auto [kw, rest] = keyword(line);
      if (kw == "@relation") {
        schema.relation = std::string(unquote(rest));
      } else if (kw == "@attribute") {
        schema.attributes.push_back(parse_attribute(rest, line_no));
      } else if (kw == "@inputs" || kw == "@input") {
        inputs = name_list(rest);
      } else if (kw == "@outputs" || kw == "@output") {
        outputs = name_list(rest);
        outputs_line = line_no;
      } else if (kw == "@data") {
        if (schema.attributes.empty()) throw ParseError(line_no, "@data before any @attribute");
        if (!outputs.empty() &&
            (outputs.size() != 1 || outputs.front() != schema.attributes.back().name))
          throw ParseError(outputs_line, "the single output must be the last attribute");
        for (const auto& name : inputs) {
          bool known = false;
          for (std::size_t j = 0; j + 1 < schema.attributes.size(); ++j)
            known = known || schema.attributes[j].name == name;
          if (!known) throw ParseError(line_no, "@inputs names unknown attribute '" + name + "'");
        }
        schema.attributes.back().role = Role::kClass;
        try {
          ds.emplace(std::move(schema));
        } catch (const DataError& e) {
          throw ParseError(line_no, e.what());
        }
        in_data = true;
      } else {
        throw ParseError(line_no, "unknown header keyword '" + kw + "'");
      }
      continue;
    }

    const auto fields = split(line, ',');
    const auto& sch = ds->schema();
    if (fields.size() != sch.size())
      throw ParseError(line_no, "row has " + std::to_string(fields.size()) +
                                    " fields, expected " + std::to_string(sch.size()));
    Row row;
    row.reserve(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j)
      row.push_back(detail::parse_cell(sch[j], fields[j], line_no));
    try {
      ds->add_row(std::move(row));
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!ds) throw ParseError(line_no, "missing @data section");
  return std::move(*ds);
}

Dataset parse_keel_dat(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_keel_dat(in);
}

Dataset read_keel_dat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return parse_keel_dat(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string write_keel_dat(const Dataset& ds) {
  const auto& sch = ds.schema();
  std::ostringstream out;
  out << "@relation " << quoted(sch.relation) << '\n';
  for (const auto& a : sch.attributes) {
    out << "@attribute " << quoted(a.name) << ' ';
    std::visit(
        [&](const auto& kind) {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, NominalKind>) {
            out << '{';
            for (std::size_t l = 0; l < kind.levels.size(); ++l)
              out << (l ? ", " : "") << quoted(kind.levels[l]);
            out << '}';
          } else if constexpr (std::is_same_v<K, IntegerKind>) {
            out << "integer";
            if (kind.min && kind.max) out << " [" << *kind.min << ", " << *kind.max << ']';
          } else {
            out << "real";
            if (kind.min && kind.max)
              out << " [" << format_number(*kind.min) << ", " << format_number(*kind.max) << ']';
          }
        },
        a.kind);
    out << '\n';
  }
  out << "@inputs ";
  for (std::size_t j = 0; j < sch.input_count(); ++j)
    out << (j ? ", " : "") << quoted(sch[j].name);
  out << "\n@outputs " << quoted(sch.class_attribute().name) << "\n@data\n";
  for (const auto& row : ds.rows()) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? ", " : "") << format_cell(sch[j], row[j]);
    out << '\n';
  }
  return out.str();
}

void write_keel_dat_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << write_keel_dat(ds);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rnimpute
