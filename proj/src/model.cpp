#include "droidtriage/model.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/parallel.hpp"

#include <stdexcept>

namespace droidtriage {

std::string_view to_string(AlgoKind kind)
{
    switch (kind) {
    case AlgoKind::NaiveBayes: return "nb";
    case AlgoKind::DecisionTree: return "dt";
    case AlgoKind::RandomTree: return "rt";
    case AlgoKind::RandomForest: return "rf";
    case AlgoKind::SimpleLogistic: return "sl";
    }
    return "?";
}

AlgoKind parse_algo_kind(std::string_view tag)
{
    if (tag == "nb")
        return AlgoKind::NaiveBayes;
    if (tag == "dt")
        return AlgoKind::DecisionTree;
    if (tag == "rt")
        return AlgoKind::RandomTree;
    if (tag == "rf")
        return AlgoKind::RandomForest;
    if (tag == "sl")
        return AlgoKind::SimpleLogistic;
    throw std::invalid_argument("unknown algorithm '" + std::string(tag) + "' (expected nb, dt, rt, rf or sl)");
}

void AlgoDescriptor::validate() const
{
    switch (kind) {
    case AlgoKind::NaiveBayes:
        if (!(alpha > 0.0))
            throw std::invalid_argument("nb: alpha must be > 0");
        break;
    case AlgoKind::DecisionTree:
        break;
    case AlgoKind::RandomTree:
        break;
    case AlgoKind::RandomForest:
        if (trees == 0)
            throw std::invalid_argument("rf: need at least one tree");
        if (!(bootstrap_fraction > 0.0 && bootstrap_fraction <= 1.0))
            throw std::invalid_argument("rf: bootstrap fraction must lie in (0, 1]");
        break;
    case AlgoKind::SimpleLogistic:
        if (max_iterations == 0)
            throw std::invalid_argument("sl: max iterations must be >= 1");
        if (cv_folds < 2)
            throw std::invalid_argument("sl: cv folds must be >= 2");
        break;
    }
}

std::string AlgoDescriptor::describe() const
{
    const std::string tag(to_string(kind));
    const auto k_text = k == 0 ? std::string("default") : std::to_string(k);
    switch (kind) {
    case AlgoKind::NaiveBayes: return tag;
    case AlgoKind::DecisionTree:
        return tag + "(" + (criterion == Criterion::Entropy ? "entropy" : "gini") + (prune ? ";pruned" : "") + ")";
    case AlgoKind::RandomTree: return tag + "(k=" + k_text + ")";
    case AlgoKind::RandomForest: return tag + "(T=" + std::to_string(trees) + ";k=" + k_text + ")";
    case AlgoKind::SimpleLogistic: return tag;
    }
    return tag;
}

AlgoKind kind_of(const Model& model)
{
    struct Visitor {
        AlgoKind operator()(const NbModel&) const { return AlgoKind::NaiveBayes; }
        AlgoKind operator()(const TreeModel& m) const
        {
            return m.is_random_tree() ? AlgoKind::RandomTree : AlgoKind::DecisionTree;
        }
        AlgoKind operator()(const ForestModel&) const { return AlgoKind::RandomForest; }
        AlgoKind operator()(const LogitModel&) const { return AlgoKind::SimpleLogistic; }
    };
    return std::visit(Visitor{}, model);
}

std::size_t num_features(const Model& model)
{
    struct Visitor {
        std::size_t operator()(const NbModel& m) const { return m.num_features(); }
        std::size_t operator()(const TreeModel& m) const { return m.num_features; }
        std::size_t operator()(const ForestModel& m) const { return m.num_features(); }
        std::size_t operator()(const LogitModel& m) const { return m.num_features; }
    };
    return std::visit(Visitor{}, model);
}

Model train(const AlgoDescriptor& algo, const Dataset& data, unsigned workers)
{
    algo.validate();
    switch (algo.kind) {
    case AlgoKind::NaiveBayes: return train_nb(data, algo.alpha);
    case AlgoKind::DecisionTree: return train_decision_tree(data, {algo.criterion, algo.prune, algo.seed});
    case AlgoKind::RandomTree:
        return train_random_tree(data, algo.k == 0 ? default_random_features(data.num_features()) : algo.k,
                                 algo.seed);
    case AlgoKind::RandomForest:
        return train_forest(data, {algo.trees, algo.k, algo.bootstrap_fraction, algo.bootstrap, algo.seed}, workers);
    case AlgoKind::SimpleLogistic:
        return train_simple_logistic(data, {algo.max_iterations, algo.cv_folds, algo.seed});
    }
    throw std::logic_error("unreachable");
}

Prediction predict(const Model& model, FeatureRow v)
{
    struct Visitor {
        FeatureRow v;
        Prediction operator()(const NbModel& m) const { return predict_nb(m, v); }
        Prediction operator()(const TreeModel& m) const { return predict_tree(m, v); }
        Prediction operator()(const ForestModel& m) const { return predict_forest(m, v); }
        Prediction operator()(const LogitModel& m) const { return predict_simple_logistic(m, v); }
    };
    return std::visit(Visitor{v}, model);
}

std::vector<Prediction> predict_all(const Model& model, const BitMatrix& rows, unsigned workers)
{
    std::vector<Prediction> out(static_cast<std::size_t>(rows.rows()));
    parallel_for(out.size(), workers,
                 [&](std::size_t i) { out[i] = predict(model, rows.row(static_cast<Eigen::Index>(i))); });
    return out;
}

} // namespace droidtriage
