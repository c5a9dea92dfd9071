#include "rnimpute/c45.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rnimpute::tree {

std::size_t TreeNode::support() const {
  return std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
}

std::size_t TreeNode::majority() const {
  return static_cast<std::size_t>(std::max_element(class_counts.begin(), class_counts.end()) -
                                  class_counts.begin());
}

double entropy(std::span<const std::size_t> counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (n == 0.0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

constexpr double kGainEps = 1e-12;

std::vector<std::size_t> class_counts(const Dataset& ds, std::span<const std::size_t> records) {
  std::vector<std::size_t> counts(ds.class_count(), 0);
  for (auto i : records) ++counts[ds.class_of(i)];
  return counts;
}

// Gain and split information of a partition given per-branch class counts.
void score(SplitCandidate& c, double base_entropy, double n,
           const std::vector<std::vector<std::size_t>>& branches) {
  double remainder = 0.0;
  std::vector<std::size_t> sizes;
  for (const auto& b : branches) {
    const auto size = std::accumulate(b.begin(), b.end(), std::size_t{0});
    if (size == 0) continue;
    sizes.push_back(size);
    remainder += static_cast<double>(size) / n * entropy(b);
  }
  c.info_gain = base_entropy - remainder;
  c.split_info = entropy(sizes);
  c.gain_ratio = c.split_info > 0.0 ? c.info_gain / c.split_info : 0.0;
}

}  // namespace

std::optional<SplitCandidate> evaluate_split(const Dataset& train,
                                             std::span<const std::size_t> records,
                                             std::size_t attribute, std::size_t min_leaf) {
  const auto& attr = train.schema()[attribute];
  const auto classes = train.class_count();
  const auto total = class_counts(train, records);
  const double base = entropy(total);
  const double n = static_cast<double>(records.size());
  SplitCandidate best;
  best.attribute = attribute;

  if (attr.is_nominal()) {
    std::vector<std::vector<std::size_t>> branches(attr.levels().size(),
                                                   std::vector<std::size_t>(classes, 0));
    for (auto i : records) ++branches[train.at(i, attribute).level().index][train.class_of(i)];
    std::size_t big = 0;
    for (const auto& b : branches)
      big += std::accumulate(b.begin(), b.end(), std::size_t{0}) >= min_leaf ? 1 : 0;
    if (big < 2) return std::nullopt;
    score(best, base, n, branches);
    return best;
  }

  std::vector<std::pair<double, std::size_t>> sorted;
  sorted.reserve(records.size());
  for (auto i : records) sorted.emplace_back(train.at(i, attribute).number(), train.class_of(i));
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::vector<std::size_t>> branches{std::vector<std::size_t>(classes, 0), total};
  bool found = false;
  for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
    ++branches[0][sorted[pos].second];
    --branches[1][sorted[pos].second];
    const auto left = pos + 1;
    if (sorted[pos].first == sorted[pos + 1].first) continue;
    if (left < min_leaf || sorted.size() - left < min_leaf) continue;
    SplitCandidate c;
    c.attribute = attribute;
    score(c, base, n, branches);
    if (!found || c.info_gain > best.info_gain + kGainEps) {
      const double a = sorted[pos].first;
      const double b = sorted[pos + 1].first;
      double mid = a + (b - a) / 2.0;
      if (!(mid < b)) mid = a;
      c.threshold = mid;
      best = c;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

namespace {

class Builder {
 public:
  Builder(const Dataset& ds, const TreeOptions& o) : ds_(ds), opt_(o) {}

  std::unique_ptr<TreeNode> build(std::vector<std::size_t> records,
                                  std::vector<bool>& used_nominal) {
    auto node = std::make_unique<TreeNode>();
    node->class_counts = class_counts(ds_, records);
    const auto nonzero = std::count_if(node->class_counts.begin(), node->class_counts.end(),
                                       [](std::size_t c) { return c > 0; });
    node->kind = Leaf{node->majority()};
    if (nonzero <= 1 || records.size() < opt_.min_leaf) return node;

    std::vector<SplitCandidate> candidates;
    for (std::size_t a = 0; a < ds_.schema().input_count(); ++a) {
      if (used_nominal[a]) continue;
      if (auto c = evaluate_split(ds_, records, a, opt_.min_leaf)) candidates.push_back(*c);
    }
    const auto chosen = choose(candidates);
    if (!chosen) return node;

    const auto& attr = ds_.schema()[chosen->attribute];
    if (attr.is_nominal()) {
      std::vector<std::vector<std::size_t>> parts(attr.levels().size());
      for (auto i : records) parts[ds_.at(i, chosen->attribute).level().index].push_back(i);
      NominalSplit split{chosen->attribute, {}, 0};
      split.children.resize(parts.size());
      std::size_t best_support = 0;
      used_nominal[chosen->attribute] = true;
      for (std::size_t l = 0; l < parts.size(); ++l) {
        if (parts[l].empty()) continue;
        if (parts[l].size() > best_support) {
          best_support = parts[l].size();
          split.default_child = l;
        }
        split.children[l] = build(std::move(parts[l]), used_nominal);
      }
      used_nominal[chosen->attribute] = false;
      node->kind = std::move(split);
      return node;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : records)
      (ds_.at(i, chosen->attribute).number() <= *chosen->threshold ? left : right).push_back(i);
    NumericSplit split{chosen->attribute, *chosen->threshold, nullptr, nullptr};
    split.left = build(std::move(left), used_nominal);
    split.right = build(std::move(right), used_nominal);
    node->kind = std::move(split);
    return node;
  }

 private:
  // Highest gain ratio among candidates whose gain reaches the mean gain of
  // the positive-gain candidates. With no positive gain the first valid
  // partition is used so that impure consistent nodes keep splitting.
  static std::optional<SplitCandidate> choose(const std::vector<SplitCandidate>& candidates) {
    if (candidates.empty()) return std::nullopt;
    double sum = 0.0;
    std::size_t positive = 0;
    for (const auto& c : candidates)
      if (c.info_gain > kGainEps) {
        sum += c.info_gain;
        ++positive;
      }
    if (positive == 0) return candidates.front();
    const double mean = sum / static_cast<double>(positive);
    const SplitCandidate* best = nullptr;
    for (const auto& c : candidates) {
      if (c.info_gain <= kGainEps || c.info_gain < mean - kGainEps) continue;
      if (!best || c.gain_ratio > best->gain_ratio + kGainEps) best = &c;
    }
    return *best;
  }

  const Dataset& ds_;
  const TreeOptions& opt_;
};

// Returns the pessimistic error estimate of the (possibly pruned) subtree.
double prune(TreeNode& node, double cf) {
  const double n = static_cast<double>(node.support());
  const double leaf_errors = n - static_cast<double>(node.class_counts[node.majority()]);
  const double as_leaf = leaf_errors + added_errors(n, leaf_errors, cf);
  if (node.is_leaf()) return as_leaf;

  double subtree = 0.0;
  std::visit(
      [&](auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NominalSplit>) {
          for (auto& c : k.children)
            if (c) subtree += prune(*c, cf);
        } else if constexpr (std::is_same_v<K, NumericSplit>) {
          subtree += prune(*k.left, cf) + prune(*k.right, cf);
        }
      },
      node.kind);
  if (as_leaf <= subtree + 1e-12) {
    node.kind = Leaf{node.majority()};
    return as_leaf;
  }
  return subtree;
}

}  // namespace

double added_errors(double n, double e, double cf) {
  if (n <= 0.0) return 0.0;
  // Normal deviate for the one-sided confidence level cf, interpolated from
  // the table C4.5 uses.
  static constexpr double val[] = {0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00};
  static constexpr double dev[] = {4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00};
  std::size_t i = 1;
  while (i + 1 < std::size(val) && cf > val[i]) ++i;
  const double z = dev[i - 1] + (dev[i] - dev[i - 1]) * (cf - val[i - 1]) / (val[i] - val[i - 1]);
  const double coeff = z * z;

  if (e < 1e-6) return n * (1.0 - std::exp(std::log(cf) / n));
  if (e < 0.9999) {
    const double v0 = n * (1.0 - std::exp(std::log(cf) / n));
    return v0 + e * (added_errors(n, 1.0, cf) - v0);
  }
  if (e + 0.5 >= n) return 0.67 * (n - e);
  const double pr = (e + 0.5 + coeff / 2.0 +
                     std::sqrt(coeff * ((e + 0.5) * (1.0 - (e + 0.5) / n) + coeff / 4.0))) /
                    (n + coeff);
  return n * pr - e;
}

double pessimistic_errors(const TreeNode& tree, double cf) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Leaf>) {
          const double n = static_cast<double>(tree.support());
          const double e = n - static_cast<double>(tree.class_counts[k.label]);
          return e + added_errors(n, e, cf);
        } else if constexpr (std::is_same_v<K, NominalSplit>) {
          double s = 0.0;
          for (const auto& c : k.children)
            if (c) s += pessimistic_errors(*c, cf);
          return s;
        } else {
          return pessimistic_errors(*k.left, cf) + pessimistic_errors(*k.right, cf);
        }
      },
      tree.kind);
}

std::unique_ptr<TreeNode> build_tree(const Dataset& train, const TreeOptions& options) {
  if (train.record_count() == 0) throw DataError("cannot build a tree from an empty training set");
  if (!train.is_complete()) throw DataError("training set must be complete");
  if (options.min_leaf < 1) throw DataError("min_leaf must be at least 1");
  if (options.prune && !(options.cf > 0.0 && options.cf < 1.0))
    throw DataError("confidence factor must lie in (0, 1)");
  std::vector<std::size_t> records(train.record_count());
  std::iota(records.begin(), records.end(), std::size_t{0});
  std::vector<bool> used(train.schema().input_count(), false);
  auto root = Builder(train, options).build(std::move(records), used);
  if (options.prune) prune(*root, options.cf);
  return root;
}

std::size_t classify(const TreeNode& tree, std::span<const Cell> record) {
  const TreeNode* node = &tree;
  while (true) {
    if (const auto* leaf = std::get_if<Leaf>(&node->kind)) return leaf->label;
    if (const auto* ns = std::get_if<NominalSplit>(&node->kind)) {
      const auto& cell = record[ns->attribute];
      const TreeNode* next = nullptr;
      if (cell.is_observed() && cell.level().index < ns->children.size())
        next = ns->children[cell.level().index].get();
      node = next ? next : ns->children[ns->default_child].get();
      continue;
    }
    const auto& split = std::get<NumericSplit>(node->kind);
    const auto& cell = record[split.attribute];
    // A missing value follows the larger branch.
    const bool left = cell.is_observed() ? cell.number() <= split.threshold
                                         : split.left->support() >= split.right->support();
    node = left ? split.left.get() : split.right.get();
  }
}

double accuracy(const TreeNode& tree, const Dataset& test) {
  if (test.record_count() == 0) throw DataError("cannot score an empty test set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.record_count(); ++i)
    correct += classify(tree, test.row(i)) == test.class_of(i) ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(test.record_count());
}

std::size_t leaf_count(const TreeNode& tree) {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Leaf>) {
          return 1;
        } else if constexpr (std::is_same_v<K, NominalSplit>) {
          std::size_t s = 0;
          for (const auto& c : k.children)
            if (c) s += leaf_count(*c);
          return s;
        } else {
          return leaf_count(*k.left) + leaf_count(*k.right);
        }
      },
      tree.kind);
}

std::size_t depth(const TreeNode& tree) {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Leaf>) {
          return 0;
        } else if constexpr (std::is_same_v<K, NominalSplit>) {
          std::size_t d = 0;
          for (const auto& c : k.children)
            if (c) d = std::max(d, depth(*c));
          return d + 1;
        } else {
          return std::max(depth(*k.left), depth(*k.right)) + 1;
        }
      },
      tree.kind);
}

}  // namespace rnimpute::tree
