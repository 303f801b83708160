#pragma once

#include "droidtriage/catalog.hpp"
#include "droidtriage/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace droidtriage {

/// Text model file:
///
///     droidtriage-model v1 <nb|dt|rt|rf|sl>
///     fingerprint <16 hex digits>
///     features <F>
///     <kind-specific body>
///     end
///
/// Doubles are written in shortest round-trip form, so a reloaded model
/// predicts bit-identically.
void save_model(const Model& model, const FeatureCatalog& catalog, std::ostream& out);
void save_model(const Model& model, const FeatureCatalog& catalog, const std::filesystem::path& path);

struct LoadedModel {
    Model model;
    std::uint64_t fingerprint = 0;
    std::size_t num_features = 0;
};

LoadedModel load_model(std::istream& in, const std::string& source = "<model>");
LoadedModel load_model(const std::filesystem::path& path);

/// Throws Error naming both fingerprints when the model was trained against
/// a different catalog.
void check_fingerprint(const LoadedModel& loaded, const FeatureCatalog& catalog);

} // namespace droidtriage
