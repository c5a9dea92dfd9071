#include <algorithm>
#include <string>

#include "rnimpute/dataset.hpp"
#include "rnimpute/random.hpp"

namespace rnimpute {

Dataset inject_mcar(const Dataset& ds, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw DataError("missing rate must lie in [0, 1], got " + std::to_string(rate));
  Dataset out = ds;
  SeededRng rng(seed);
  const auto inputs = ds.schema().input_count();
  // One draw per observed input cell in row-major order.
  for (std::size_t i = 0; i < ds.record_count(); ++i)
    for (std::size_t j = 0; j < inputs; ++j)
      if (ds.at(i, j).is_observed() && rng.uniform() < rate) out.set(i, j, Cell::missing());
  return out;
}

FoldPlan stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("fold count must be at least 2");
  if (k > ds.record_count())
    throw DataError("fold count " + std::to_string(k) + " exceeds record count " +
                    std::to_string(ds.record_count()));

  std::vector<std::vector<std::size_t>> by_class(ds.class_count());
  for (std::size_t i = 0; i < ds.record_count(); ++i) by_class[ds.class_of(i)].push_back(i);

  FoldPlan plan{k, seed, std::vector<std::size_t>(ds.record_count(), 0)};
  SeededRng rng(seed);
  // The deal position carries over between classes so that classes with
  // fewer than k records do not all pile into the first folds.
  std::size_t next_fold = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (auto idx : members) {
      plan.assignment[idx] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return plan;
}

}  // namespace rnimpute
