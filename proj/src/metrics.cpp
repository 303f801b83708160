#include "droidtriage/metrics.hpp"

#include "droidtriage/error.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace droidtriage {

namespace {

void check_inputs(std::span<const double> scores, std::span<const Label> truth, std::size_t& positives,
                  std::size_t& negatives)
{
    if (scores.size() != truth.size())
        throw std::invalid_argument("scores and labels differ in length");
    const auto [benign, malware] = class_counts(truth);
    if (benign == 0 || malware == 0)
        throw Error("ROC analysis needs instances of both classes");
    positives = malware;
    negatives = benign;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending)
{
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? scores[a] > scores[b] : scores[a] < scores[b];
    });
    return order;
}

} // namespace

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted)
{
    if (truth.size() != predicted.size())
        throw std::invalid_argument("truth and prediction lists differ in length");
    if (truth.empty())
        throw std::invalid_argument("confusion matrix of empty lists");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == Label::Malware;
        const bool p = predicted[i] == Label::Malware;
        (t ? (p ? cm.sus_sus : cm.sus_ben) : (p ? cm.ben_sus : cm.ben_ben)) += 1;
    }
    return cm;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const Label> truth)
{
    std::size_t positives = 0, negatives = 0;
    check_inputs(scores, truth, positives, negatives);
    const auto order = order_by_score(scores, true);

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::uint64_t tp = 0, fp = 0;
    std::uint64_t twice_area = 0; // in units of one (fp, tp) cell
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        const auto prev_tp = tp, prev_fp = fp;
        for (; i < order.size() && scores[order[i]] == threshold; ++i)
            (truth[order[i]] == Label::Malware ? tp : fp) += 1;
        twice_area += (fp - prev_fp) * (tp + prev_tp);
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives), threshold});
    }
    curve.auc = static_cast<double>(twice_area) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
    return curve;
}

double mann_whitney_auc(std::span<const double> scores, std::span<const Label> truth)
{
    std::size_t positives = 0, negatives = 0;
    check_inputs(scores, truth, positives, negatives);
    const auto order = order_by_score(scores, false);

    // Doubled mid-ranks keep everything in integers: a tie group occupying
    // 1-based ranks s+1 .. e has mid-rank (s + 1 + e) / 2.
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t s = 0; s < order.size();) {
        std::size_t e = s;
        while (e < order.size() && scores[order[e]] == scores[order[s]])
            ++e;
        std::uint64_t malware_in_group = 0;
        for (std::size_t i = s; i < e; ++i)
            malware_in_group += truth[order[i]] == Label::Malware ? 1 : 0;
        twice_rank_sum += malware_in_group * (s + 1 + e);
        s = e;
    }
    const std::uint64_t p = positives;
    const auto twice_u = twice_rank_sum - p * (p + 1);
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

} // namespace droidtriage
