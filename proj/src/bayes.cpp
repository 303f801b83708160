#include "droidtriage/bayes.hpp"

#include "droidtriage/error.hpp"

#include <cmath>
#include <stdexcept>

namespace droidtriage {

NbModel train_nb(const Dataset& data, double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("naive Bayes smoothing alpha must be > 0");
    const auto [n_benign, n_malware] = class_counts(data);
    if (n_benign == 0 || n_malware == 0)
        throw Error("naive Bayes needs instances of both classes");

    const auto f = data.features.cols();
    Eigen::ArrayXd ones_benign = Eigen::ArrayXd::Zero(f);
    Eigen::ArrayXd ones_malware = Eigen::ArrayXd::Zero(f);
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto& target = data.labels[i] == Label::Malware ? ones_malware : ones_benign;
        target += data.row(i).cast<double>().transpose().array();
    }

    NbModel model;
    model.alpha = alpha;
    model.prior_malware = static_cast<double>(n_malware) / static_cast<double>(data.size());
    model.theta_benign = (ones_benign + alpha) / (static_cast<double>(n_benign) + 2 * alpha);
    model.theta_malware = (ones_malware + alpha) / (static_cast<double>(n_malware) + 2 * alpha);
    return model;
}

Prediction predict_nb(const NbModel& model, FeatureRow v)
{
    if (static_cast<std::size_t>(v.size()) != model.num_features())
        throw Error("vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(model.num_features()));

    const Eigen::ArrayXd bits = v.cast<double>().transpose().array();
    auto log_likelihood = [&bits](const Eigen::ArrayXd& theta) {
        return (bits * theta.log() + (1.0 - bits) * (1.0 - theta).log()).sum();
    };
    const double log_malware = std::log(model.prior_malware) + log_likelihood(model.theta_malware);
    const double log_benign = std::log(1.0 - model.prior_malware) + log_likelihood(model.theta_benign);
    return make_prediction(1.0 / (1.0 + std::exp(log_benign - log_malware)));
}

} // namespace droidtriage
