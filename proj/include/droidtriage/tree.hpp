#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/impurity.hpp"
#include "droidtriage/prediction.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace droidtriage {

struct TreeNode {
    static constexpr std::uint32_t kLeaf = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t feature = kLeaf; ///< split feature, kLeaf for leaves
    std::uint32_t child0 = 0;      ///< subtree for bit = 0
    std::uint32_t child1 = 0;      ///< subtree for bit = 1
    ClassCounts counts;            ///< training instances reaching this node

    bool is_leaf() const noexcept { return feature == kLeaf; }
    bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
    Criterion criterion = Criterion::Entropy;
    bool prune = false;
    std::size_t k = 0; ///< candidate features per split; 0 = all (decision tree)
    std::uint64_t seed = 0;

    bool operator==(const TreeParams&) const = default;
};

/// Binary tree over binary features, nodes stored in pre-order (root at 0).
struct TreeModel {
    std::vector<TreeNode> nodes;
    TreeParams params;
    std::size_t num_features = 0;

    bool is_random_tree() const noexcept { return params.k != 0; }
    std::size_t depth() const;
    std::size_t leaf_count() const;
    /// Index of the leaf reached by v.
    std::uint32_t leaf_for(FeatureRow v) const;

    /// Structure and leaf counts; params are not compared.
    bool same_structure(const TreeModel& other) const { return nodes == other.nodes; }
};

struct DecisionTreeParams {
    Criterion criterion = Criterion::Entropy;
    bool prune = true;
    /// Seeds the stratified pruning holdout.
    std::uint64_t seed = 1;
    double holdout_fraction = 0.2;
};

/// Greedy recursive growth on `rows` (repeats allowed). Each split takes the
/// candidate with the largest impurity decrease, ties to the lowest feature
/// index. Candidates are features unused on the path that split the node
/// into two non-empty children. With k = 0 every such feature is a
/// candidate; otherwise features are drawn in random order until k
/// non-constant ones have been examined. Growth stops at pure nodes, nodes
/// with fewer than 2 instances, or when no candidate exists.
TreeModel grow_tree(const BitMatrix& features, std::span<const Label> labels, std::span<const std::size_t> rows,
                    Criterion criterion, std::size_t k, std::uint64_t seed);

/// Bottom-up reduced-error pruning: a subtree becomes a leaf when that makes
/// no more errors on the holdout rows than keeping it.
void reduced_error_prune(TreeModel& tree, const BitMatrix& features, std::span<const Label> labels,
                         std::span<const std::size_t> holdout);

/// With prune set, grows on a stratified (1 - holdout_fraction) share and
/// prunes against the rest; classes too small to contribute a holdout
/// instance are used for growth only.
TreeModel train_decision_tree(const Dataset& data, const DecisionTreeParams& params = {});

/// Entropy criterion, k random candidates per split, never pruned.
TreeModel train_random_tree(const Dataset& data, std::size_t k, std::uint64_t seed);

/// Score is the training malware fraction at the leaf.
Prediction predict_tree(const TreeModel& model, FeatureRow v);

} // namespace droidtriage
