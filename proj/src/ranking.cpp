#include "droidtriage/ranking.hpp"

#include "text.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace droidtriage {

std::vector<FeatureClassCounts> feature_class_counts(const Dataset& data)
{
    const auto [n_benign, n_malware] = class_counts(data);
    Eigen::VectorXd is_malware(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i)
        is_malware(static_cast<Eigen::Index>(i)) = data.labels[i] == Label::Malware ? 1.0 : 0.0;

    const Eigen::MatrixXd x = data.features.cast<double>();
    const Eigen::VectorXd positives = x.transpose() * Eigen::VectorXd::Ones(x.rows());
    const Eigen::VectorXd malware_positives = x.transpose() * is_malware;

    std::vector<FeatureClassCounts> out(data.num_features());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const auto pos_mal = static_cast<std::uint64_t>(std::llround(malware_positives(jj)));
        const auto pos_all = static_cast<std::uint64_t>(std::llround(positives(jj)));
        out[j] = {pos_all - pos_mal, pos_mal, n_benign, n_malware};
    }
    return out;
}

MiRanking rank_features(const Dataset& data)
{
    const auto [n_benign, n_malware] = class_counts(data);
    if (n_benign == 0 || n_malware == 0)
        throw Error("feature ranking needs instances of both classes");

    const auto counts = feature_class_counts(data);
    MiRanking ranking;
    ranking.reserve(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        ranking.push_back({data.catalog[j].name, j, mutual_information(counts[j])});

    std::sort(ranking.begin(), ranking.end(), [](const RankedFeature& a, const RankedFeature& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.name < b.name;
    });
    return ranking;
}

std::vector<std::string> top_k(const MiRanking& ranking, std::size_t k)
{
    if (k == 0 || k > ranking.size())
        throw std::out_of_range("top-k needs 1 <= k <= " + std::to_string(ranking.size()) + ", got " +
                                std::to_string(k));
    std::vector<std::string> names;
    names.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        names.push_back(ranking[i].name);
    return names;
}

void write_ranking_csv(const MiRanking& ranking, std::ostream& out, std::size_t limit)
{
    const auto n = limit == 0 ? ranking.size() : std::min(limit, ranking.size());
    out << "rank,name,score\n";
    for (std::size_t i = 0; i < n; ++i)
        out << (i + 1) << ',' << ranking[i].name << ',' << text::format_fixed(ranking[i].score, 6) << '\n';
}

} // namespace droidtriage
