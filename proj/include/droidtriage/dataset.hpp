#pragma once

#include "droidtriage/catalog.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace droidtriage {

/// MALWARE is the "suspicious" class.
enum class Label : std::uint8_t { Benign = 0, Malware = 1 };

std::string_view to_string(Label label);

/// One row per instance, one column per catalog feature, cells 0 or 1.
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureVector = Eigen::Matrix<std::uint8_t, 1, Eigen::Dynamic>;
/// Binds to a FeatureVector or to a row of a BitMatrix without copying.
using FeatureRow = Eigen::Ref<const FeatureVector>;

struct Dataset {
    FeatureCatalog catalog;
    BitMatrix features;
    std::vector<Label> labels;

    Dataset() = default;
    /// Throws Error if shapes disagree or a cell is not 0/1.
    Dataset(FeatureCatalog catalog, BitMatrix features, std::vector<Label> labels);

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t num_features() const noexcept { return catalog.size(); }
    bool empty() const noexcept { return labels.empty(); }
    auto row(std::size_t i) const { return features.row(static_cast<Eigen::Index>(i)); }

    bool operator==(const Dataset& other) const
    {
        return catalog == other.catalog && labels == other.labels && features == other.features;
    }
};

/// (n_benign, n_malware)
std::pair<std::size_t, std::size_t> class_counts(std::span<const Label> labels);
inline std::pair<std::size_t, std::size_t> class_counts(const Dataset& data) { return class_counts(data.labels); }

/// Rows in the given order (repeats allowed).
Dataset subset(const Dataset& data, std::span<const std::size_t> rows);
/// Columns in the given order, with the matching sub-catalog.
Dataset project(const Dataset& data, const std::vector<std::size_t>& columns);
Dataset project(const Dataset& data, FeatureSet set);
Dataset project(const Dataset& data, const std::vector<std::string>& names);

Dataset read_csv(std::istream& in, const FeatureCatalog& catalog, const std::string& source = "<csv>");
Dataset read_csv(const std::filesystem::path& path, const FeatureCatalog& catalog);
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Feature rows for prediction. The `class` column is optional here; when
/// present, labels are returned too.
struct UnlabeledRows {
    BitMatrix features;
    std::optional<std::vector<Label>> labels;
};
UnlabeledRows read_feature_csv(const std::filesystem::path& path, const FeatureCatalog& catalog);

/// Optional pair of features whose XOR is tied to the label: with
/// probability q the XOR equals the label bit (malware = 1).
struct XorInteraction {
    std::size_t first = 0;
    std::size_t second = 0;
    double strength = 1.0;
};

/// Class-conditional independent Bernoulli generator parameters.
struct SyntheticSpec {
    Eigen::ArrayXd p_benign;
    Eigen::ArrayXd p_malware;
    std::size_t n_benign = 0;
    std::size_t n_malware = 0;
    std::optional<XorInteraction> xor_interaction;

    /// Every feature at `rate` in both classes.
    static SyntheticSpec uniform(std::size_t num_features, double rate, std::size_t n_benign,
                                 std::size_t n_malware);
    void validate(std::size_t num_features) const;
};

inline constexpr double kDefaultBackgroundRate = 0.05;

/// Spec file: directives `#n_benign=`, `#n_malware=`, optional `#xor=a,b,q`
/// and `#background=`, then CSV `name,p_benign,p_malware`. Catalog features
/// not listed take the background rate in both classes.
SyntheticSpec parse_synthetic_spec(std::istream& in, const FeatureCatalog& catalog,
                                   const std::string& source = "<spec>");
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path, const FeatureCatalog& catalog);

/// Benign block first, then malware block. Pure function of (spec, seed).
Dataset synthesize(const SyntheticSpec& spec, const FeatureCatalog& catalog, std::uint64_t seed);

} // namespace droidtriage
