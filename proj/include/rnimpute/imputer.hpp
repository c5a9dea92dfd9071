#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rnimpute/baselines.hpp"
#include "rnimpute/dataset.hpp"

namespace rnimpute {

/// Parameter overrides as text, e.g. {"k": "5", "m": "2.0"}.
using ParamMap = std::map<std::string, std::string>;

class UnknownImputer : public std::runtime_error {
 public:
  explicit UnknownImputer(std::string_view name)
      : std::runtime_error("unknown imputer '" + std::string(name) + "'") {}
};

/// A missing-value imputer. Implementations are pure functions of
/// (dataset, parameters, seed).
class Imputer {
 public:
  virtual ~Imputer() = default;
  virtual std::string name() const = 0;
  virtual Dataset impute(const Dataset& ds, std::uint64_t seed) const = 0;
  /// Effective parameters, as text, for result records.
  virtual ParamMap params() const = 0;
};

using ImputerFactory = std::function<std::unique_ptr<Imputer>(const ParamMap&)>;

/// Adds or replaces a named imputer; later plug-ins (e.g. an SVM-based one)
/// register here.
void register_imputer(const std::string& name, ImputerFactory factory);

/// Builds a registered imputer. Unknown parameter keys and malformed values
/// throw DataError; unknown names throw UnknownImputer.
std::unique_ptr<Imputer> make_imputer(std::string_view name, const ParamMap& overrides = {});

/// Registered names in sorted order. Built-ins: fkmi, kmi, knni, mean, rnii, wknni.
std::vector<std::string> imputer_names();

}  // namespace rnimpute
