#pragma once

#include "droidtriage/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace droidtriage {

/// k disjoint test-index sets, each sorted ascending.
using Folds = std::vector<std::vector<std::size_t>>;

/// Each class is shuffled with a stream seeded by `seed`; benign then malware
/// instances are dealt round-robin into the folds with one running counter,
/// so per-class fold counts differ by at most one. Requires
/// 2 <= k <= smaller class size.
Folds stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

inline Folds stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed)
{
    return stratified_folds(data.labels, k, seed);
}

/// All indices in [0, n) that are not in `fold` (fold must be sorted).
std::vector<std::size_t> complement(const std::vector<std::size_t>& fold, std::size_t n);

} // namespace droidtriage
