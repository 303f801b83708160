#include "droidtriage/tree.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/rng.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace droidtriage {

namespace {

class Grower {
public:
    Grower(const BitMatrix& x, std::span<const Label> labels, Criterion criterion, std::size_t k,
           std::uint64_t seed)
        : x_(x), labels_(labels), criterion_(criterion), k_(k), used_(static_cast<std::size_t>(x.cols()), 0)
    {
        if (k_ != 0)
            rng_.emplace(seed);
    }

    std::vector<TreeNode> take() { return std::move(nodes_); }

    std::uint32_t grow(const std::vector<std::size_t>& rows)
    {
        ClassCounts counts;
        for (auto r : rows)
            (labels_[r] == Label::Malware ? counts.malware : counts.benign) += 1;

        const auto self = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({TreeNode::kLeaf, 0, 0, counts});
        if (counts.pure() || rows.size() < 2)
            return self;

        const auto split = choose_split(rows, counts);
        if (!split)
            return self;

        std::vector<std::size_t> rows0, rows1;
        const auto col = static_cast<Eigen::Index>(*split);
        for (auto r : rows)
            (x_(static_cast<Eigen::Index>(r), col) ? rows1 : rows0).push_back(r);

        used_[*split] = 1;
        const auto child0 = grow(rows0);
        const auto child1 = grow(rows1);
        used_[*split] = 0;

        auto& node = nodes_[self];
        node.feature = static_cast<std::uint32_t>(*split);
        node.child0 = child0;
        node.child1 = child1;
        return self;
    }

private:
    struct Candidate {
        std::size_t feature;
        double gain;
    };

    // Impurity decrease of splitting on `feature`; nullopt if one side is empty.
    std::optional<double> evaluate(std::size_t feature, const std::vector<std::size_t>& rows,
                                   const ClassCounts& parent, double parent_impurity) const
    {
        ClassCounts ones;
        const auto col = static_cast<Eigen::Index>(feature);
        for (auto r : rows) {
            if (x_(static_cast<Eigen::Index>(r), col))
                (labels_[r] == Label::Malware ? ones.malware : ones.benign) += 1;
        }
        if (ones.total() == 0 || ones.total() == parent.total())
            return std::nullopt;
        const ClassCounts zeros{parent.benign - ones.benign, parent.malware - ones.malware};
        const double n = static_cast<double>(parent.total());
        return parent_impurity - static_cast<double>(zeros.total()) / n * impurity(zeros, criterion_) -
               static_cast<double>(ones.total()) / n * impurity(ones, criterion_);
    }

    std::optional<std::size_t> choose_split(const std::vector<std::size_t>& rows, const ClassCounts& counts)
    {
        const double parent_impurity = impurity(counts, criterion_);
        std::vector<Candidate> examined;

        if (k_ == 0) {
            for (std::size_t f = 0; f < used_.size(); ++f) {
                if (used_[f])
                    continue;
                if (auto gain = evaluate(f, rows, counts, parent_impurity))
                    examined.push_back({f, *gain});
            }
        }
        else {
            std::vector<std::size_t> pool;
            for (std::size_t f = 0; f < used_.size(); ++f)
                if (!used_[f])
                    pool.push_back(f);
            for (std::size_t t = 0; t < pool.size() && examined.size() < k_; ++t) {
                const auto j = t + static_cast<std::size_t>(rng_->below(pool.size() - t));
                std::swap(pool[t], pool[j]);
                if (auto gain = evaluate(pool[t], rows, counts, parent_impurity))
                    examined.push_back({pool[t], *gain});
            }
        }

        std::optional<Candidate> best;
        for (const auto& c : examined) {
            if (!best || c.gain > best->gain || (c.gain == best->gain && c.feature < best->feature))
                best = c;
        }
        if (!best)
            return std::nullopt;
        return best->feature;
    }

    const BitMatrix& x_;
    std::span<const Label> labels_;
    Criterion criterion_;
    std::size_t k_;
    std::optional<Rng> rng_;
    std::vector<std::uint8_t> used_;
    std::vector<TreeNode> nodes_;
};

std::size_t depth_from(const std::vector<TreeNode>& nodes, std::uint32_t i)
{
    const auto& n = nodes[i];
    if (n.is_leaf())
        return 0;
    return 1 + std::max(depth_from(nodes, n.child0), depth_from(nodes, n.child1));
}

std::size_t count_errors(const ClassCounts& counts, const std::vector<std::size_t>& rows,
                         std::span<const Label> labels)
{
    const auto predicted = decide(counts.malware_fraction());
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return labels[r] != predicted; }));
}

std::size_t prune_from(std::vector<TreeNode>& nodes, std::uint32_t i, const BitMatrix& x,
                       std::span<const Label> labels, const std::vector<std::size_t>& rows)
{
    auto& node = nodes[i];
    const auto as_leaf = count_errors(node.counts, rows, labels);
    if (node.is_leaf())
        return as_leaf;

    std::vector<std::size_t> rows0, rows1;
    const auto col = static_cast<Eigen::Index>(node.feature);
    for (auto r : rows)
        (x(static_cast<Eigen::Index>(r), col) ? rows1 : rows0).push_back(r);
    const auto c0 = node.child0;
    const auto c1 = node.child1;
    const auto as_subtree = prune_from(nodes, c0, x, labels, rows0) + prune_from(nodes, c1, x, labels, rows1);
    if (as_leaf <= as_subtree) {
        nodes[i].feature = TreeNode::kLeaf;
        nodes[i].child0 = nodes[i].child1 = 0;
        return as_leaf;
    }
    return as_subtree;
}

std::uint32_t compact_from(const std::vector<TreeNode>& old, std::uint32_t i, std::vector<TreeNode>& out)
{
    const auto self = static_cast<std::uint32_t>(out.size());
    out.push_back(old[i]);
    if (!old[i].is_leaf()) {
        const auto c0 = compact_from(old, old[i].child0, out);
        const auto c1 = compact_from(old, old[i].child1, out);
        out[self].child0 = c0;
        out[self].child1 = c1;
    }
    return self;
}

void check_length(const TreeModel& model, FeatureRow v)
{
    if (static_cast<std::size_t>(v.size()) != model.num_features)
        throw Error("vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(model.num_features));
}

} // namespace

std::size_t TreeModel::depth() const
{
    return nodes.empty() ? 0 : depth_from(nodes, 0);
}

std::size_t TreeModel::leaf_count() const
{
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::uint32_t TreeModel::leaf_for(FeatureRow v) const
{
    std::uint32_t i = 0;
    while (!nodes[i].is_leaf())
        i = v(static_cast<Eigen::Index>(nodes[i].feature)) ? nodes[i].child1 : nodes[i].child0;
    return i;
}

TreeModel grow_tree(const BitMatrix& features, std::span<const Label> labels, std::span<const std::size_t> rows,
                    Criterion criterion, std::size_t k, std::uint64_t seed)
{
    if (rows.empty())
        throw Error("cannot grow a tree from an empty dataset");
    if (k > static_cast<std::size_t>(features.cols()))
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                    std::to_string(features.cols()) + " available features");
    Grower grower(features, labels, criterion, k, seed);
    grower.grow(std::vector<std::size_t>(rows.begin(), rows.end()));

    TreeModel model;
    model.nodes = grower.take();
    model.params = {criterion, false, k, seed};
    model.num_features = static_cast<std::size_t>(features.cols());
    return model;
}

void reduced_error_prune(TreeModel& tree, const BitMatrix& features, std::span<const Label> labels,
                         std::span<const std::size_t> holdout)
{
    if (tree.nodes.empty())
        return;
    prune_from(tree.nodes, 0, features, labels, std::vector<std::size_t>(holdout.begin(), holdout.end()));
    std::vector<TreeNode> compact;
    compact.reserve(tree.nodes.size());
    compact_from(tree.nodes, 0, compact);
    tree.nodes = std::move(compact);
    tree.params.prune = true;
}

TreeModel train_decision_tree(const Dataset& data, const DecisionTreeParams& params)
{
    if (data.empty())
        throw Error("cannot train a decision tree on an empty dataset");

    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (!params.prune)
        return grow_tree(data.features, data.labels, all, params.criterion, 0, params.seed);

    if (!(params.holdout_fraction > 0.0 && params.holdout_fraction < 1.0))
        throw std::invalid_argument("pruning holdout fraction must lie in (0, 1)");

    // Stratified holdout: shuffle each class, hold out floor(fraction * n_class).
    Rng rng(params.seed);
    std::vector<std::size_t> grow_rows, holdout_rows;
    for (auto cls : {Label::Benign, Label::Malware}) {
        std::vector<std::size_t> members;
        for (auto i : all)
            if (data.labels[i] == cls)
                members.push_back(i);
        rng.shuffle(members.begin(), members.end());
        const auto n_hold = static_cast<std::size_t>(params.holdout_fraction * static_cast<double>(members.size()));
        holdout_rows.insert(holdout_rows.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_hold));
        grow_rows.insert(grow_rows.end(), members.begin() + static_cast<std::ptrdiff_t>(n_hold), members.end());
    }
    std::sort(grow_rows.begin(), grow_rows.end());
    std::sort(holdout_rows.begin(), holdout_rows.end());

    auto tree = grow_tree(data.features, data.labels, grow_rows, params.criterion, 0, params.seed);
    reduced_error_prune(tree, data.features, data.labels, holdout_rows);
    return tree;
}

TreeModel train_random_tree(const Dataset& data, std::size_t k, std::uint64_t seed)
{
    if (k == 0 || k > data.num_features())
        throw std::invalid_argument("random tree needs 1 <= k <= " + std::to_string(data.num_features()) +
                                    ", got " + std::to_string(k));
    if (data.empty())
        throw Error("cannot train a random tree on an empty dataset");
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return grow_tree(data.features, data.labels, all, Criterion::Entropy, k, seed);
}

Prediction predict_tree(const TreeModel& model, FeatureRow v)
{
    check_length(model, v);
    return make_prediction(model.nodes[model.leaf_for(v)].counts.malware_fraction());
}

} // namespace droidtriage
