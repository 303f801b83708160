#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace droidtriage {

enum class FeatureCategory { Permission, Api, Command };

/// PF = permissions, AF = API calls and commands, CAPF = both.
enum class FeatureSet { PF, AF, CAPF };

std::string_view to_string(FeatureCategory category);
std::string_view to_string(FeatureSet set);
FeatureSet parse_feature_set(std::string_view text);

struct FeatureDef {
    std::string name;
    FeatureCategory category = FeatureCategory::Permission;
    /// Permission name for PERMISSION features, raw substring otherwise.
    std::string pattern;

    bool operator==(const FeatureDef&) const = default;
};

inline bool in_feature_set(FeatureCategory category, FeatureSet set)
{
    switch (set) {
    case FeatureSet::PF: return category == FeatureCategory::Permission;
    case FeatureSet::AF: return category != FeatureCategory::Permission;
    case FeatureSet::CAPF: return true;
    }
    return false;
}

/// Ordered, immutable list of features. Position in the catalog is the bit
/// position in every feature vector built against it.
class FeatureCatalog {
public:
    FeatureCatalog() = default;

    /// Throws Error on empty or duplicate names and empty patterns.
    explicit FeatureCatalog(std::vector<FeatureDef> features);

    std::size_t size() const noexcept { return features_.size(); }
    bool empty() const noexcept { return features_.empty(); }
    const FeatureDef& operator[](std::size_t i) const { return features_[i]; }
    auto begin() const noexcept { return features_.begin(); }
    auto end() const noexcept { return features_.end(); }
    const std::vector<FeatureDef>& features() const noexcept { return features_; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::vector<std::string> names() const;

    /// Order-sensitive FNV-1a 64 over the names, each terminated by '\n'.
    std::uint64_t fingerprint() const noexcept;

    std::size_t count(FeatureSet set) const;

    bool operator==(const FeatureCatalog& other) const { return features_ == other.features_; }

private:
    std::vector<FeatureDef> features_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::string fingerprint_hex(std::uint64_t fingerprint);

FeatureCatalog parse_catalog(std::istream& in, const std::string& source = "<catalog>");
FeatureCatalog load_catalog(const std::filesystem::path& path);
void write_catalog(const FeatureCatalog& catalog, std::ostream& out);
void write_catalog(const FeatureCatalog& catalog, const std::filesystem::path& path);

/// The shipped 179-feature catalog (125 permissions, 54 API/command features).
const FeatureCatalog& default_catalog();

/// Indices of the features belonging to `set`, in catalog order.
std::vector<std::size_t> feature_set_indices(const FeatureCatalog& catalog, FeatureSet set);
FeatureCatalog select_feature_set(const FeatureCatalog& catalog, FeatureSet set);
FeatureCatalog select_features(const FeatureCatalog& catalog, const std::vector<std::size_t>& indices);

} // namespace droidtriage
