#include "droidtriage/folds.hpp"

#include "droidtriage/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace droidtriage {

Folds stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed)
{
    const auto [n_benign, n_malware] = class_counts(labels);
    const auto smallest = std::min(n_benign, n_malware);
    if (k < 2 || k > smallest)
        throw std::invalid_argument("stratified folds need 2 <= k <= " + std::to_string(smallest) +
                                    " (smaller class size), got k = " + std::to_string(k));

    Rng rng(seed);
    Folds folds(k);
    std::size_t position = 0;
    for (auto cls : {Label::Benign, Label::Malware}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls)
                members.push_back(i);
        rng.shuffle(members.begin(), members.end());
        for (auto i : members)
            folds[position++ % k].push_back(i);
    }
    for (auto& fold : folds)
        std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& fold, std::size_t n)
{
    std::vector<std::size_t> out;
    out.reserve(n - std::min(n, fold.size()));
    auto it = fold.begin();
    for (std::size_t i = 0; i < n; ++i) {
        if (it != fold.end() && *it == i) {
            ++it;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

} // namespace droidtriage
