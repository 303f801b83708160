#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/prediction.hpp"

#include <cstdint>
#include <vector>

namespace droidtriage {

/// Base learner of one boosting round: adds value0 or value1 to the
/// additive score depending on the feature bit. Values already include the
/// 0.5 step factor.
struct SimpleRegressor {
    std::uint32_t feature = 0;
    double value0 = 0;
    double value1 = 0;

    bool operator==(const SimpleRegressor&) const = default;
};

/// Additive logistic model F(v) = intercept + sum of regressor outputs,
/// with P(malware | v) = 1 / (1 + exp(-2 F(v))).
struct LogitModel {
    double intercept = 0;
    std::vector<SimpleRegressor> regressors;
    std::size_t num_features = 0;
    std::size_t max_iterations = 0;
    std::size_t cv_folds = 0;

    std::size_t iterations_used() const noexcept { return regressors.size(); }
};

struct WorkingResponse {
    double z = 0; ///< regression target
    double w = 0; ///< instance weight
};

inline constexpr double kResponseLimit = 3.0;
inline constexpr double kMinWeight = 1e-10;

/// z = (y - p) / (p (1 - p)) clamped to [-z_max, z_max], w = max(p (1 - p), 1e-10).
/// Throws std::domain_error unless 0 < p < 1.
WorkingResponse logitboost_response(int y, double p, double z_max = kResponseLimit);

struct LogitParams {
    std::size_t max_iterations = 200;
    std::size_t cv_folds = 5;
    std::uint64_t seed = 1;
};

/// Plain LogitBoost for a fixed number of rounds. Each round fits the
/// weighted least-squares two-cell regressor on the single feature with the
/// smallest weighted squared error (ties to the lowest index) and adds half
/// of it to F.
LogitModel fit_logitboost(const Dataset& data, std::size_t iterations);

/// Picks the round count in [0, max_iterations] maximising the mean held-out
/// log-likelihood over stratified cv_folds folds (ties to fewer rounds), then
/// refits on all data for that many rounds.
LogitModel train_simple_logistic(const Dataset& data, const LogitParams& params = {});

double additive_score(const LogitModel& model, FeatureRow v);
double logistic_probability(double additive_score);

/// sum_i y_i log p_i + (1 - y_i) log(1 - p_i), natural log.
double log_likelihood(const LogitModel& model, const Dataset& data);

Prediction predict_simple_logistic(const LogitModel& model, FeatureRow v);

} // namespace droidtriage
