#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

namespace droidtriage {

/// Information entropy in bits of a vector of class fractions, 0 log 0 := 0.
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::ArrayBase<Derived>& fractions)
{
    using Scalar = typename Derived::Scalar;
    Scalar h = 0;
    for (Eigen::Index i = 0; i < fractions.size(); ++i) {
        const Scalar f = fractions(i);
        if (f > Scalar(0))
            h -= f * std::log2(f);
    }
    return h;
}

/// Gini impurity 1 - sum f_i^2.
template <typename Derived>
typename Derived::Scalar gini(const Eigen::ArrayBase<Derived>& fractions)
{
    using Scalar = typename Derived::Scalar;
    return Scalar(1) - fractions.square().sum();
}

enum class Criterion { Entropy, Gini };

/// Benign/malware instance counts at a tree node.
struct ClassCounts {
    std::uint64_t benign = 0;
    std::uint64_t malware = 0;

    std::uint64_t total() const noexcept { return benign + malware; }
    bool pure() const noexcept { return benign == 0 || malware == 0; }
    double malware_fraction() const noexcept
    {
        return total() == 0 ? 0.0 : static_cast<double>(malware) / static_cast<double>(total());
    }
    /// (benign, malware) fractions; zeros for an empty node.
    Eigen::Array2d fractions() const noexcept
    {
        if (total() == 0)
            return Eigen::Array2d::Zero();
        const double n = static_cast<double>(total());
        return {static_cast<double>(benign) / n, static_cast<double>(malware) / n};
    }

    bool operator==(const ClassCounts&) const = default;
};

inline double impurity(const ClassCounts& counts, Criterion criterion)
{
    const auto f = counts.fractions();
    return criterion == Criterion::Entropy ? entropy(f) : gini(f);
}

} // namespace droidtriage
