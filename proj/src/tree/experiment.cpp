#include "rnimpute/experiment.hpp"

#include <future>
#include <numeric>

namespace rnimpute {

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) {
  // splitmix64 finalizer over (seed, fold)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(fold) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double run_fold(const Dataset& ds, const Imputer& imputer, const ExperimentConfig& cfg,
                const FoldPlan& plan, std::size_t fold) {
  const auto train_idx = plan.train_indices(fold);
  const auto test_idx = plan.test_indices(fold);
  const auto seed = fold_seed(cfg.seed, fold);

  const Dataset train = imputer.impute(ds.subset(train_idx), seed);
  const auto tree = tree::build_tree(train, cfg.tree);

  Dataset test;
  if (cfg.test_imputation == TestImputation::kIndependent) {
    test = imputer.impute(ds.subset(test_idx), seed);
  } else {
    std::vector<std::size_t> joint = train_idx;
    joint.insert(joint.end(), test_idx.begin(), test_idx.end());
    const Dataset all = imputer.impute(ds.subset(joint), seed);
    std::vector<std::size_t> tail(test_idx.size());
    std::iota(tail.begin(), tail.end(), train_idx.size());
    test = all.subset(tail);
  }
  return tree::accuracy(*tree, test);
}

}  // namespace

ExperimentResult run_experiment(const Dataset& ds, const Imputer& imputer,
                                const ExperimentConfig& config, std::string dataset_name) {
  const auto plan = stratified_kfold(ds, config.folds, config.seed);
  ExperimentResult r{std::move(dataset_name), imputer.name(), imputer.params(), config.seed,
                     std::vector<double>(config.folds, 0.0), 0.0};

  if (config.parallel) {
    std::vector<std::future<double>> jobs;
    for (std::size_t f = 0; f < config.folds; ++f)
      jobs.push_back(std::async(std::launch::async, run_fold, std::cref(ds), std::cref(imputer),
                                std::cref(config), std::cref(plan), f));
    // Collect in fold order so the first failing fold is the one reported.
    std::optional<FoldFailure> failure;
    for (std::size_t f = 0; f < config.folds; ++f) {
      try {
        r.fold_accuracies[f] = jobs[f].get();
      } catch (const std::exception& e) {
        if (!failure) failure.emplace(f, e.what());
      }
    }
    if (failure) throw *failure;
  } else {
    for (std::size_t f = 0; f < config.folds; ++f) {
      try {
        r.fold_accuracies[f] = run_fold(ds, imputer, config, plan, f);
      } catch (const std::exception& e) {
        throw FoldFailure(f, e.what());
      }
    }
  }
  r.mean = std::accumulate(r.fold_accuracies.begin(), r.fold_accuracies.end(), 0.0) /
           static_cast<double>(config.folds);
  return r;
}

nlohmann::ordered_json to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["imputer"] = r.imputer;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  j["seed"] = r.seed;
  j["fold_accuracies"] = r.fold_accuracies;
  j["mean"] = r.mean;
  return j;
}

ExperimentResult experiment_from_json(const nlohmann::json& j) {
  ExperimentResult r;
  r.dataset = j.at("dataset").get<std::string>();
  r.imputer = j.at("imputer").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.fold_accuracies = j.at("fold_accuracies").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  return r;
}

}  // namespace rnimpute
