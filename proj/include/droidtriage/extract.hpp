#pragma once

#include "droidtriage/catalog.hpp"
#include "droidtriage/dataset.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace droidtriage {

inline constexpr std::string_view kManifestName = "AndroidManifest.xml";

struct ScanResult {
    FeatureVector bits;
    std::vector<std::string> warnings;
};

/// True if `name` occurs in `text` delimited on both sides by characters
/// outside [A-Za-z0-9_] (or the ends of the text).
bool contains_token(std::string_view text, std::string_view name);

/// Scans an unpacked application tree. PERMISSION features are matched as
/// tokens in the root AndroidManifest.xml; API and COMMAND features as raw,
/// case-sensitive substrings of any other regular file under the root. Files
/// are read bytewise, so patterns inside binaries are found too.
///
/// A missing manifest leaves the permission bits at 0 and records a warning.
ScanResult scan_app(const std::filesystem::path& root, const FeatureCatalog& catalog);

} // namespace droidtriage
