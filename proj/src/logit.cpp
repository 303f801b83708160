#include "droidtriage/logit.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/folds.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace droidtriage {

namespace {

// log(1 + e^x) without overflow.
double softplus(double x)
{
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Same values as logitboost_response, written in the form that stays finite
// when p rounds to 0 or 1.
WorkingResponse response_unchecked(bool positive, double p, double z_max)
{
    const double z = positive ? 1.0 / p : -1.0 / (1.0 - p);
    return {std::clamp(z, -z_max, z_max), std::max(p * (1.0 - p), kMinWeight)};
}

/// Boosting state over one training sample.
class Booster {
public:
    explicit Booster(const Dataset& data)
        : x_(data.features.cast<double>()),
          y_(static_cast<Eigen::Index>(data.size())),
          f_(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(data.size())))
    {
        for (std::size_t i = 0; i < data.size(); ++i)
            y_(static_cast<Eigen::Index>(i)) = data.labels[i] == Label::Malware ? 1.0 : 0.0;
        ones_ = x_.colwise().sum().transpose().array();
    }

    SimpleRegressor step()
    {
        const Eigen::Index n = y_.size();
        Eigen::VectorXd w(n), wz(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = logistic_probability(f_(i));
            const auto r = response_unchecked(y_(i) > 0.5, p, kResponseLimit);
            w(i) = r.w;
            wz(i) = r.w * r.z;
        }
        const double total_w = w.sum();
        const double total_wz = wz.sum();
        const Eigen::VectorXd ones_w = x_.transpose() * w;
        const Eigen::VectorXd ones_wz = x_.transpose() * wz;

        // Minimising the weighted SSE of a two-cell mean fit is the same as
        // maximising sum over cells of (sum w z)^2 / (sum w).
        SimpleRegressor best;
        double best_fit = -1;
        for (Eigen::Index j = 0; j < x_.cols(); ++j) {
            double v0, v1, fit;
            const double count = ones_(j);
            if (count == 0 || count == static_cast<double>(n)) {
                v0 = v1 = total_wz / total_w;
                fit = total_wz * total_wz / total_w;
            }
            else {
                const double w1 = ones_w(j), wz1 = ones_wz(j);
                const double w0 = total_w - w1, wz0 = total_wz - wz1;
                v0 = wz0 / w0;
                v1 = wz1 / w1;
                fit = wz0 * v0 + wz1 * v1;
            }
            if (fit > best_fit) {
                best_fit = fit;
                best = {static_cast<std::uint32_t>(j), 0.5 * v0, 0.5 * v1};
            }
        }

        const auto col = x_.col(best.feature).array();
        f_ += best.value0 + (best.value1 - best.value0) * col;
        return best;
    }

private:
    Eigen::MatrixXd x_;
    Eigen::ArrayXd y_;
    Eigen::ArrayXd f_;
    Eigen::ArrayXd ones_;
};

LogitModel boost(const Dataset& data, std::size_t iterations)
{
    LogitModel model;
    model.num_features = data.num_features();
    model.max_iterations = iterations;
    if (iterations == 0 || data.num_features() == 0)
        return model;
    Booster booster(data);
    model.regressors.reserve(iterations);
    for (std::size_t m = 0; m < iterations; ++m)
        model.regressors.push_back(booster.step());
    return model;
}

void check_two_classes(const Dataset& data)
{
    const auto [n_benign, n_malware] = class_counts(data);
    if (n_benign == 0 || n_malware == 0)
        throw Error("simple logistic needs instances of both classes");
}

} // namespace

WorkingResponse logitboost_response(int y, double p, double z_max)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("working response needs 0 < p < 1");
    if (y != 0 && y != 1)
        throw std::domain_error("working response needs y in {0, 1}");
    const double z = (static_cast<double>(y) - p) / (p * (1.0 - p));
    return {std::clamp(z, -z_max, z_max), std::max(p * (1.0 - p), kMinWeight)};
}

double logistic_probability(double additive_score)
{
    return 1.0 / (1.0 + std::exp(-2.0 * additive_score));
}

double additive_score(const LogitModel& model, FeatureRow v)
{
    if (static_cast<std::size_t>(v.size()) != model.num_features)
        throw Error("vector has " + std::to_string(v.size()) + " features, model expects " +
                    std::to_string(model.num_features));
    double f = model.intercept;
    for (const auto& r : model.regressors)
        f += v(static_cast<Eigen::Index>(r.feature)) ? r.value1 : r.value0;
    return f;
}

double log_likelihood(const LogitModel& model, const Dataset& data)
{
    double ll = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = additive_score(model, data.row(i));
        // log p = -softplus(-2F), log(1 - p) = -softplus(2F)
        ll -= data.labels[i] == Label::Malware ? softplus(-2.0 * f) : softplus(2.0 * f);
    }
    return ll;
}

Prediction predict_simple_logistic(const LogitModel& model, FeatureRow v)
{
    return make_prediction(logistic_probability(additive_score(model, v)));
}

LogitModel fit_logitboost(const Dataset& data, std::size_t iterations)
{
    check_two_classes(data);
    return boost(data, iterations);
}

LogitModel train_simple_logistic(const Dataset& data, const LogitParams& params)
{
    check_two_classes(data);
    if (params.max_iterations < 1)
        throw std::invalid_argument("simple logistic needs max_iterations >= 1");
    if (params.cv_folds < 2)
        throw std::invalid_argument("simple logistic needs cv_folds >= 2");

    const auto folds = stratified_folds(data, params.cv_folds, params.seed);
    Eigen::ArrayXd held_out_ll = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(params.max_iterations + 1));

    for (const auto& test_rows : folds) {
        const auto train = subset(data, complement(test_rows, data.size()));
        const auto test = subset(data, test_rows);
        check_two_classes(train);

        Booster booster(train);
        // Held-out scores are updated incrementally, one regressor per round.
        Eigen::ArrayXd f = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(test.size()));
        auto fold_ll = [&] {
            double ll = 0;
            for (std::size_t i = 0; i < test.size(); ++i) {
                const double fi = f(static_cast<Eigen::Index>(i));
                ll -= test.labels[i] == Label::Malware ? softplus(-2.0 * fi) : softplus(2.0 * fi);
            }
            return ll;
        };
        held_out_ll(0) += fold_ll();
        for (std::size_t m = 1; m <= params.max_iterations; ++m) {
            const auto r = booster.step();
            const auto col = test.features.col(r.feature).cast<double>().array();
            f += r.value0 + (r.value1 - r.value0) * col;
            held_out_ll(static_cast<Eigen::Index>(m)) += fold_ll();
        }
    }

    std::size_t best = 0;
    for (Eigen::Index m = 1; m < held_out_ll.size(); ++m)
        if (held_out_ll(m) > held_out_ll(static_cast<Eigen::Index>(best)))
            best = static_cast<std::size_t>(m);

    auto model = boost(data, best);
    model.max_iterations = params.max_iterations;
    model.cv_folds = params.cv_folds;
    return model;
}

} // namespace droidtriage
