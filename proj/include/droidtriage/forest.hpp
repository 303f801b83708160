#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/prediction.hpp"
#include "droidtriage/tree.hpp"

#include <cstdint>
#include <vector>

namespace droidtriage {

/// floor(log2 F) + 1, the usual random-feature count.
std::size_t default_random_features(std::size_t num_features);

struct ForestParams {
    std::size_t trees = 10;
    std::size_t k = 0;              ///< 0 = default_random_features(F), resolved at training
    double bootstrap_fraction = 1.0; ///< bootstrap size ceil(fraction * N)
    bool bootstrap = true;           ///< false trains every tree on the full data
    std::uint64_t seed = 1;

    bool operator==(const ForestParams&) const = default;
};

struct ForestModel {
    std::vector<TreeModel> trees;
    ForestParams params; ///< with k resolved

    std::size_t num_features() const { return trees.empty() ? 0 : trees.front().num_features; }
};

/// Tree i is a random tree with seed derive_seed(seed, i); its bootstrap is
/// drawn from a stream seeded with derive_seed(derive_seed(seed, i), 0).
/// The result does not depend on `workers`.
ForestModel train_forest(const Dataset& data, const ForestParams& params = {}, unsigned workers = 1);

/// Hard majority vote; score = fraction of trees voting MALWARE.
Prediction predict_forest(const ForestModel& model, FeatureRow v);

} // namespace droidtriage
