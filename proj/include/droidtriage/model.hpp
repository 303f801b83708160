#pragma once

#include "droidtriage/bayes.hpp"
#include "droidtriage/dataset.hpp"
#include "droidtriage/forest.hpp"
#include "droidtriage/logit.hpp"
#include "droidtriage/prediction.hpp"
#include "droidtriage/tree.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace droidtriage {

enum class AlgoKind { NaiveBayes, DecisionTree, RandomTree, RandomForest, SimpleLogistic };

/// Short tags: nb, dt, rt, rf, sl.
std::string_view to_string(AlgoKind kind);
AlgoKind parse_algo_kind(std::string_view tag);

/// A classifier family plus its hyperparameters. Fields that do not apply to
/// `kind` are ignored.
struct AlgoDescriptor {
    AlgoKind kind = AlgoKind::RandomForest;
    double alpha = 1.0;                         // nb
    Criterion criterion = Criterion::Entropy;   // dt
    bool prune = true;                          // dt
    std::size_t k = 0;                          // rt, rf; 0 = floor(log2 F) + 1
    std::size_t trees = 10;                     // rf
    double bootstrap_fraction = 1.0;            // rf
    bool bootstrap = true;                      // rf
    std::size_t max_iterations = 200;           // sl
    std::size_t cv_folds = 5;                   // sl
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on out-of-range hyperparameters.
    void validate() const;
    /// e.g. "rf(T=10,k=8)"; k is shown as given (0 = default).
    std::string describe() const;
};

using Model = std::variant<NbModel, TreeModel, ForestModel, LogitModel>;

AlgoKind kind_of(const Model& model);
std::size_t num_features(const Model& model);

Model train(const AlgoDescriptor& algo, const Dataset& data, unsigned workers = 1);
Prediction predict(const Model& model, FeatureRow v);
std::vector<Prediction> predict_all(const Model& model, const BitMatrix& rows, unsigned workers = 1);

} // namespace droidtriage
