#pragma once

#include "droidtriage/dataset.hpp"
#include "droidtriage/error.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace droidtriage {

/// Contingency counts of one binary feature against the binary label.
struct FeatureClassCounts {
    std::uint64_t pos_benign = 0;  ///< benign instances with bit = 1
    std::uint64_t pos_malware = 0; ///< malware instances with bit = 1
    std::uint64_t benign = 0;
    std::uint64_t malware = 0;
};

/// Mutual information between feature and label in bits. Empty cells
/// contribute 0 (0 log 0 := 0); no smoothing.
template <typename Scalar = double>
Scalar mutual_information(const FeatureClassCounts& c)
{
    if (c.pos_benign > c.benign || c.pos_malware > c.malware)
        throw Error("feature counts exceed class totals");
    const auto total = c.benign + c.malware;
    if (total == 0)
        throw Error("mutual information of an empty sample");

    const Scalar n = static_cast<Scalar>(total);
    // joint[x][y]: x = bit value, y = 0 benign / 1 malware
    const std::uint64_t joint[2][2] = {
        {c.benign - c.pos_benign, c.malware - c.pos_malware},
        {c.pos_benign, c.pos_malware},
    };
    const Scalar py[2] = {static_cast<Scalar>(c.benign) / n, static_cast<Scalar>(c.malware) / n};

    Scalar mi = 0;
    for (int x = 0; x < 2; ++x) {
        const Scalar px = static_cast<Scalar>(joint[x][0] + joint[x][1]) / n;
        for (int y = 0; y < 2; ++y) {
            if (joint[x][y] == 0)
                continue;
            const Scalar pxy = static_cast<Scalar>(joint[x][y]) / n;
            mi += pxy * std::log2(pxy / (px * py[y]));
        }
    }
    // Rounding can leave tiny negatives for independent features.
    return mi < Scalar(0) ? Scalar(0) : mi;
}

/// Per-feature contingency counts, in catalog order.
std::vector<FeatureClassCounts> feature_class_counts(const Dataset& data);

struct RankedFeature {
    std::string name;
    std::size_t index = 0; ///< catalog position
    double score = 0;      ///< bits
};

/// Descending by score; ties broken by ascending name.
using MiRanking = std::vector<RankedFeature>;

/// Throws unless both classes are present.
MiRanking rank_features(const Dataset& data);

/// First k names. Throws std::out_of_range unless 1 <= k <= ranking.size().
std::vector<std::string> top_k(const MiRanking& ranking, std::size_t k);

/// `rank,name,score`, score to 6 decimals.
void write_ranking_csv(const MiRanking& ranking, std::ostream& out, std::size_t limit = 0);

} // namespace droidtriage
