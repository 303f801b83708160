#pragma once

#include "droidtriage/dataset.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace droidtriage {

/// Counts indexed true class -> predicted class; "sus" is malware.
struct ConfusionMatrix {
    std::uint64_t ben_ben = 0;
    std::uint64_t ben_sus = 0;
    std::uint64_t sus_ben = 0;
    std::uint64_t sus_sus = 0;

    std::uint64_t total() const noexcept { return ben_ben + ben_sus + sus_ben + sus_sus; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept
    {
        ben_ben += o.ben_ben;
        ben_sus += o.ben_sus;
        sus_ben += o.sus_ben;
        sus_sus += o.sus_sus;
        return *this;
    }
    friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) noexcept { return a += b; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws on length mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

/// Rates whose class is absent from the matrix are NaN. Precision is empty
/// when nothing was predicted malware.
template <typename Scalar = double>
struct MetricsReport {
    Scalar tpr{}, tnr{}, fpr{}, fnr{}, acc{}, err{};
    std::optional<Scalar> precision;
    ConfusionMatrix source;
};

template <typename Scalar = double>
MetricsReport<Scalar> metrics(const ConfusionMatrix& cm)
{
    const auto total = cm.total();
    if (total == 0)
        throw std::invalid_argument("metrics of an empty confusion matrix");
    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? std::numeric_limits<Scalar>::quiet_NaN()
                        : static_cast<Scalar>(num) / static_cast<Scalar>(den);
    };
    const auto benign = cm.ben_ben + cm.ben_sus;
    const auto malware = cm.sus_ben + cm.sus_sus;

    MetricsReport<Scalar> r;
    r.source = cm;
    r.acc = ratio(cm.ben_ben + cm.sus_sus, total);
    r.err = ratio(cm.ben_sus + cm.sus_ben, total);
    r.fpr = ratio(cm.ben_sus, benign);
    r.fnr = ratio(cm.sus_ben, malware);
    r.tpr = ratio(cm.sus_sus, malware);
    r.tnr = ratio(cm.ben_ben, benign);
    if (cm.ben_sus + cm.sus_sus > 0)
        r.precision = ratio(cm.sus_sus, cm.ben_sus + cm.sus_sus);
    return r;
}

struct RocPoint {
    double fpr = 0;
    double tpr = 0;
    /// Instances scoring >= threshold are called malware; +inf at (0, 0).
    double threshold = 0;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0;
};

/// Threshold sweep over distinct scores, highest first; equal scores enter
/// together. AUC by the trapezoid rule, accumulated on integer counts.
RocCurve roc_auc(std::span<const double> scores, std::span<const Label> truth);

/// Probability that a random malware instance outscores a random benign one,
/// ties counted one half, from mid-ranks.
double mann_whitney_auc(std::span<const double> scores, std::span<const Label> truth);

} // namespace droidtriage
