#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/prediction.hpp"

#include <Eigen/Core>

namespace droidtriage {

/// Bernoulli naive Bayes. theta_*(f) = P(bit f = 1 | class).
struct NbModel {
    double prior_malware = 0.5;
    Eigen::ArrayXd theta_benign;
    Eigen::ArrayXd theta_malware;
    double alpha = 1.0;

    std::size_t num_features() const { return static_cast<std::size_t>(theta_benign.size()); }
};

/// Laplace-smoothed: theta = (count + alpha) / (n_class + 2 alpha).
NbModel train_nb(const Dataset& data, double alpha = 1.0);

/// Posterior P(malware | v), evaluated in log space.
Prediction predict_nb(const NbModel& model, FeatureRow v);

} // namespace droidtriage
