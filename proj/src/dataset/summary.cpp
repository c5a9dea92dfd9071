#include "json.hpp"

#include "rnimpute/dataset.hpp"

namespace rnimpute {

DatasetSummary summarize(const Dataset& ds) {
  DatasetSummary s;
  const auto& sch = ds.schema();
  for (std::size_t j = 0; j < sch.input_count(); ++j) {
    if (sch[j].is_real()) ++s.real_attributes;
    else if (sch[j].is_integer()) ++s.integer_attributes;
    else ++s.nominal_attributes;
  }
  s.example_count = ds.record_count();
  s.class_count = ds.class_count();

  // %MV counts input cells only; class cells are never missing.
  std::size_t missing_cells = 0;
  std::size_t incomplete_rows = 0;
  for (const auto& row : ds.rows()) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < sch.input_count(); ++j) m += row[j].is_missing() ? 1 : 0;
    missing_cells += m;
    incomplete_rows += m > 0 ? 1 : 0;
  }
  const auto cells = s.example_count * sch.input_count();
  s.mv_percent = cells ? 100.0 * static_cast<double>(missing_cells) / static_cast<double>(cells)
                       : 0.0;
  s.mv_example_percent = s.example_count ? 100.0 * static_cast<double>(incomplete_rows) /
                                               static_cast<double>(s.example_count)
                                         : 0.0;
  return s;
}

std::string summary_to_json(const DatasetSummary& s, std::string_view name) {
  nlohmann::ordered_json j;
  if (!name.empty()) j["dataset"] = name;
  j["attributes"] = {{"total", s.input_attributes()},
                     {"real", s.real_attributes},
                     {"integer", s.integer_attributes},
                     {"nominal", s.nominal_attributes}};
  j["examples"] = s.example_count;
  j["classes"] = s.class_count;
  j["mv_percent"] = s.mv_percent;
  j["mv_example_percent"] = s.mv_example_percent;
  return j.dump(2);
}

}  // namespace rnimpute
