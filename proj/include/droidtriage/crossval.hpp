#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/folds.hpp"
#include "droidtriage/metrics.hpp"
#include "droidtriage/model.hpp"

#include <string>
#include <vector>

namespace droidtriage {

struct CvResult {
    AlgoDescriptor algo;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    Folds folds;
    std::vector<ConfusionMatrix> fold_confusion;
    ConfusionMatrix pooled;              ///< element-wise sum of fold matrices
    MetricsReport<double> report;        ///< from the pooled matrix
    RocCurve roc;                        ///< over all held-out scores
    std::vector<double> scores;          ///< held-out score per instance
    std::vector<Label> predicted;        ///< held-out label per instance
};

/// Stratified k-fold: train on each complement, predict the fold, pool.
/// Folds run on up to `workers` threads; the result does not depend on it.
/// Training failures are rethrown as Error naming the fold.
CvResult cross_validate(const Dataset& data, const AlgoDescriptor& algo, std::size_t k = 10,
                        std::uint64_t seed = 1, unsigned workers = 1);

struct ComparisonRow {
    std::string algo;
    std::string feature_set;
    std::size_t features = 0;
    MetricsReport<double> metrics;
    double auc = 0;
};

/// One cross-validated row per (algorithm, feature set), algorithms outermost.
std::vector<ComparisonRow> compare(const Dataset& data, const std::vector<AlgoDescriptor>& algos,
                                   const std::vector<FeatureSet>& sets, std::size_t k = 10,
                                   std::uint64_t seed = 1, unsigned workers = 1);

ComparisonRow summarize(const CvResult& result, std::string feature_set, std::size_t features);

} // namespace droidtriage
