#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rnimpute/dataset.hpp"

namespace rnimpute::tree {

struct TreeOptions {
  std::size_t min_leaf = 2;
  /// Confidence factor for pessimistic error pruning.
  double cf = 0.25;
  bool prune = true;
};

struct TreeNode;

struct Leaf {
  std::size_t label = 0;
};

struct NominalSplit {
  std::size_t attribute = 0;
  /// One child per level seen in training; nullptr for unseen levels.
  std::vector<std::unique_ptr<TreeNode>> children;
  /// Child with the largest training support; used for unseen levels.
  std::size_t default_child = 0;
};

struct NumericSplit {
  std::size_t attribute = 0;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;   // value <= threshold
  std::unique_ptr<TreeNode> right;  // value > threshold
};

struct TreeNode {
  std::variant<Leaf, NominalSplit, NumericSplit> kind;
  /// Training class counts that reached this node.
  std::vector<std::size_t> class_counts;

  std::size_t support() const;
  std::size_t majority() const;
  bool is_leaf() const { return std::holds_alternative<Leaf>(kind); }
};

struct SplitCandidate {
  std::size_t attribute = 0;
  std::optional<double> threshold;
  double info_gain = 0.0;
  double split_info = 0.0;
  double gain_ratio = 0.0;
};

/// Entropy in bits of a class-count vector.
double entropy(std::span<const std::size_t> counts);

/// Best split on one attribute for the given records, or nullopt when no
/// partition leaves at least two branches with min_leaf records each.
/// Numeric attributes are scanned at midpoints between consecutive distinct
/// values and keep the threshold with the highest information gain.
std::optional<SplitCandidate> evaluate_split(const Dataset& train,
                                             std::span<const std::size_t> records,
                                             std::size_t attribute, std::size_t min_leaf);

std::unique_ptr<TreeNode> build_tree(const Dataset& train, const TreeOptions& options = {});

std::size_t classify(const TreeNode& tree, std::span<const Cell> record);
double accuracy(const TreeNode& tree, const Dataset& test);

/// Upper-bound extra errors for `n` cases with `e` observed errors at
/// confidence `cf` (the binomial bound used by C4.5's pruning).
double added_errors(double n, double e, double cf);
/// Sum over leaves of errors + added_errors.
double pessimistic_errors(const TreeNode& tree, double cf);

std::size_t leaf_count(const TreeNode& tree);
std::size_t depth(const TreeNode& tree);

}  // namespace rnimpute::tree
