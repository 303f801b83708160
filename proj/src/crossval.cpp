#include "droidtriage/crossval.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/parallel.hpp"

namespace droidtriage {

CvResult cross_validate(const Dataset& data, const AlgoDescriptor& algo, std::size_t k, std::uint64_t seed,
                        unsigned workers)
{
    algo.validate();
    CvResult result;
    result.algo = algo;
    result.k = k;
    result.seed = seed;
    result.folds = stratified_folds(data, k, seed);
    result.fold_confusion.resize(k);
    result.scores.assign(data.size(), 0.0);
    result.predicted.assign(data.size(), Label::Benign);

    parallel_for(k, workers, [&](std::size_t fold) {
        const auto& test_rows = result.folds[fold];
        try {
            const auto train_set = subset(data, complement(test_rows, data.size()));
            const auto model = train(algo, train_set);
            std::vector<Label> truth, predicted;
            truth.reserve(test_rows.size());
            predicted.reserve(test_rows.size());
            for (auto i : test_rows) {
                const auto p = predict(model, data.row(i));
                result.scores[i] = p.score;
                result.predicted[i] = p.label;
                truth.push_back(data.labels[i]);
                predicted.push_back(p.label);
            }
            result.fold_confusion[fold] = confusion(truth, predicted);
        }
        catch (const std::exception& e) {
            throw Error("fold " + std::to_string(fold) + ": " + e.what());
        }
    });

    for (const auto& cm : result.fold_confusion)
        result.pooled += cm;
    result.report = metrics(result.pooled);
    result.roc = roc_auc(result.scores, data.labels);
    return result;
}

ComparisonRow summarize(const CvResult& result, std::string feature_set, std::size_t features)
{
    return {result.algo.describe(), std::move(feature_set), features, result.report, result.roc.auc};
}

std::vector<ComparisonRow> compare(const Dataset& data, const std::vector<AlgoDescriptor>& algos,
                                   const std::vector<FeatureSet>& sets, std::size_t k, std::uint64_t seed,
                                   unsigned workers)
{
    if (algos.empty())
        throw std::invalid_argument("comparison needs at least one algorithm");
    if (sets.empty())
        throw std::invalid_argument("comparison needs at least one feature set");
    std::vector<Dataset> projected;
    projected.reserve(sets.size());
    for (auto set : sets)
        projected.push_back(project(data, set));

    std::vector<ComparisonRow> rows;
    for (const auto& algo : algos) {
        for (std::size_t s = 0; s < sets.size(); ++s) {
            const auto result = cross_validate(projected[s], algo, k, seed, workers);
            rows.push_back(summarize(result, std::string(to_string(sets[s])), projected[s].num_features()));
        }
    }
    return rows;
}

} // namespace droidtriage
