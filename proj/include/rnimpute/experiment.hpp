#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnimpute/c45.hpp"
#include "rnimpute/dataset.hpp"
#include "rnimpute/imputer.hpp"

namespace rnimpute {

enum class TestImputation {
  /// Each test partition is imputed on its own observed values.
  kIndependent,
  /// Test rows are imputed together with the raw training partition.
  kJoint,
};

struct ExperimentConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  tree::TreeOptions tree;
  TestImputation test_imputation = TestImputation::kIndependent;
  /// Run folds on separate threads. Results do not depend on this.
  bool parallel = true;
};

struct ExperimentResult {
  std::string dataset;
  std::string imputer;
  ParamMap params;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracies;
  double mean = 0.0;
};

class FoldFailure : public std::runtime_error {
 public:
  FoldFailure(std::size_t fold, const std::string& what)
      : std::runtime_error("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}
  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t fold_;
};

/// Seed handed to the imputer for one fold.
std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

/// Stratified k-fold: impute the training part, build the tree, impute the
/// test part, classify. Throws FoldFailure naming the first failing fold.
ExperimentResult run_experiment(const Dataset& ds, const Imputer& imputer,
                                const ExperimentConfig& config, std::string dataset_name = {});

nlohmann::ordered_json to_json(const ExperimentResult& r);
ExperimentResult experiment_from_json(const nlohmann::json& j);

}  // namespace rnimpute
