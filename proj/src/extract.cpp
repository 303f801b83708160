#include "droidtriage/extract.hpp"

#include "droidtriage/error.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

namespace droidtriage {

namespace {

bool is_identifier_char(char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path.string() + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

bool contains_token(std::string_view text, std::string_view name)
{
    if (name.empty())
        return false;
    for (auto pos = text.find(name); pos != std::string_view::npos; pos = text.find(name, pos + 1)) {
        const bool left_ok = pos == 0 || !is_identifier_char(text[pos - 1]);
        const auto end = pos + name.size();
        const bool right_ok = end == text.size() || !is_identifier_char(text[end]);
        if (left_ok && right_ok)
            return true;
    }
    return false;
}

ScanResult scan_app(const std::filesystem::path& root, const FeatureCatalog& catalog)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error("'" + root.string() + "' is not a readable directory");

    ScanResult result{FeatureVector::Zero(static_cast<Eigen::Index>(catalog.size())), {}};

    const auto manifest = root / kManifestName;
    if (fs::is_regular_file(manifest, ec)) {
        const auto text = read_file(manifest);
        for (std::size_t i = 0; i < catalog.size(); ++i)
            if (catalog[i].category == FeatureCategory::Permission && contains_token(text, catalog[i].pattern))
                result.bits(static_cast<Eigen::Index>(i)) = 1;
    }
    else {
        result.warnings.push_back("no " + std::string(kManifestName) + " under '" + root.string() +
                                  "'; permission features left at 0");
    }

    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec)
        throw Error("cannot traverse '" + root.string() + "': " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file(ec))
            continue;
        if (entry.path() == manifest)
            continue;
        const auto text = read_file(entry.path());
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            const auto bit = static_cast<Eigen::Index>(i);
            if (catalog[i].category != FeatureCategory::Permission && !result.bits(bit) &&
                text.find(catalog[i].pattern) != std::string::npos)
                result.bits(bit) = 1;
        }
    }
    return result;
}

} // namespace droidtriage
