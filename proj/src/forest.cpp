#include "droidtriage/forest.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/parallel.hpp"
#include "droidtriage/rng.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace droidtriage {

std::size_t default_random_features(std::size_t num_features)
{
    if (num_features == 0)
        return 0;
    return static_cast<std::size_t>(std::bit_width(num_features) - 1) + 1;
}

ForestModel train_forest(const Dataset& data, const ForestParams& params, unsigned workers)
{
    if (data.empty())
        throw Error("cannot train a forest on an empty dataset");
    const auto f = data.num_features();
    ForestParams resolved = params;
    if (resolved.k == 0)
        resolved.k = default_random_features(f);
    if (resolved.trees == 0)
        throw std::invalid_argument("forest needs at least one tree");
    if (resolved.k > f)
        throw std::invalid_argument("forest k = " + std::to_string(resolved.k) + " exceeds " +
                                    std::to_string(f) + " features");
    if (!(resolved.bootstrap_fraction > 0.0 && resolved.bootstrap_fraction <= 1.0))
        throw std::invalid_argument("bootstrap fraction must lie in (0, 1]");

    const auto n = data.size();
    const auto sample_size = static_cast<std::size_t>(std::ceil(resolved.bootstrap_fraction * static_cast<double>(n)));

    ForestModel model;
    model.params = resolved;
    model.trees.resize(resolved.trees);
    parallel_for(resolved.trees, workers, [&](std::size_t i) {
        const auto tree_seed = derive_seed(resolved.seed, i);
        std::vector<std::size_t> rows;
        if (resolved.bootstrap) {
            Rng rng(derive_seed(tree_seed, 0));
            rows.resize(sample_size);
            for (auto& r : rows)
                r = static_cast<std::size_t>(rng.below(n));
        }
        else {
            rows.resize(n);
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        model.trees[i] = grow_tree(data.features, data.labels, rows, Criterion::Entropy, resolved.k, tree_seed);
    });
    return model;
}

Prediction predict_forest(const ForestModel& model, FeatureRow v)
{
    if (static_cast<std::size_t>(v.size()) != model.num_features())
        throw Error("vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(model.num_features()));
    std::size_t votes = 0;
    for (const auto& tree : model.trees)
        votes += predict_tree(tree, v).label == Label::Malware ? 1 : 0;
    return make_prediction(static_cast<double>(votes) / static_cast<double>(model.trees.size()));
}

} // namespace droidtriage
