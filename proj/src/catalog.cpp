#include "droidtriage/catalog.hpp"

#include "default_catalog.hpp"
#include "droidtriage/error.hpp"
#include "text.hpp"

#include <fstream>
#include <sstream>

namespace droidtriage {

std::string_view to_string(FeatureCategory category)
{
    switch (category) {
    case FeatureCategory::Permission: return "PERMISSION";
    case FeatureCategory::Api: return "API";
    case FeatureCategory::Command: return "COMMAND";
    }
    return "?";
}

std::string_view to_string(FeatureSet set)
{
    switch (set) {
    case FeatureSet::PF: return "pf";
    case FeatureSet::AF: return "af";
    case FeatureSet::CAPF: return "capf";
    }
    return "?";
}

FeatureSet parse_feature_set(std::string_view text)
{
    if (text == "pf" || text == "PF")
        return FeatureSet::PF;
    if (text == "af" || text == "AF")
        return FeatureSet::AF;
    if (text == "capf" || text == "CAPF")
        return FeatureSet::CAPF;
    throw Error("unknown feature set '" + std::string(text) + "' (expected pf, af or capf)");
}

FeatureCatalog::FeatureCatalog(std::vector<FeatureDef> features) : features_(std::move(features))
{
    index_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (f.name.empty())
            throw Error("feature " + std::to_string(i) + " has an empty name");
        if (f.pattern.empty())
            throw Error("feature '" + f.name + "' has an empty pattern");
        if (!index_.emplace(f.name, i).second)
            throw Error("duplicate feature name '" + f.name + "'");
    }
}

std::optional<std::size_t> FeatureCatalog::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> FeatureCatalog::names() const
{
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_)
        out.push_back(f.name);
    return out;
}

std::uint64_t FeatureCatalog::fingerprint() const noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (const auto& f : features_) {
        for (unsigned char c : f.name)
            feed(c);
        feed('\n');
    }
    return h;
}

std::size_t FeatureCatalog::count(FeatureSet set) const
{
    std::size_t n = 0;
    for (const auto& f : features_)
        n += in_feature_set(f.category, set) ? 1 : 0;
    return n;
}

std::string fingerprint_hex(std::uint64_t fingerprint)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[fingerprint & 0xF];
        fingerprint >>= 4;
    }
    return out;
}

FeatureCatalog parse_catalog(std::istream& in, const std::string& source)
{
    std::vector<FeatureDef> features;
    std::unordered_map<std::string, std::size_t> seen;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::chomp(raw);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != "name,category,pattern")
                throw ParseError(source, line_no, "expected header 'name,category,pattern'");
            header_seen = true;
            continue;
        }
        const auto cells = text::split(line);
        if (cells.size() != 3)
            throw ParseError(source, line_no, "expected 3 fields, found " + std::to_string(cells.size()));

        FeatureDef def;
        def.name = std::string(cells[0]);
        if (cells[1] == "PERMISSION")
            def.category = FeatureCategory::Permission;
        else if (cells[1] == "API")
            def.category = FeatureCategory::Api;
        else if (cells[1] == "COMMAND")
            def.category = FeatureCategory::Command;
        else
            throw ParseError(source, line_no, "unknown category '" + std::string(cells[1]) + "'");
        def.pattern = std::string(cells[2]);

        if (def.name.empty())
            throw ParseError(source, line_no, "empty feature name");
        if (def.pattern.empty())
            throw ParseError(source, line_no, "empty pattern for '" + def.name + "'");
        if (auto [it, fresh] = seen.emplace(def.name, line_no); !fresh)
            throw ParseError(source, line_no,
                             "duplicate feature name '" + def.name + "' (first defined on line " +
                                 std::to_string(it->second) + ")");
        features.push_back(std::move(def));
    }
    if (features.empty())
        throw ParseError(source, line_no, "no features defined");
    return FeatureCatalog(std::move(features));
}

FeatureCatalog load_catalog(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open catalog '" + path.string() + "'");
    return parse_catalog(in, path.string());
}

void write_catalog(const FeatureCatalog& catalog, std::ostream& out)
{
    out << "name,category,pattern\n";
    for (const auto& f : catalog)
        out << f.name << ',' << to_string(f.category) << ',' << f.pattern << '\n';
}

void write_catalog(const FeatureCatalog& catalog, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write catalog '" + path.string() + "'");
    write_catalog(catalog, out);
    if (!out)
        throw Error("I/O error writing '" + path.string() + "'");
}

const FeatureCatalog& default_catalog()
{
    static const FeatureCatalog catalog = [] {
        std::istringstream in(detail::kDefaultCatalogCsv);
        return parse_catalog(in, "<default catalog>");
    }();
    return catalog;
}

std::vector<std::size_t> feature_set_indices(const FeatureCatalog& catalog, FeatureSet set)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < catalog.size(); ++i)
        if (in_feature_set(catalog[i].category, set))
            out.push_back(i);
    return out;
}

FeatureCatalog select_features(const FeatureCatalog& catalog, const std::vector<std::size_t>& indices)
{
    std::vector<FeatureDef> out;
    out.reserve(indices.size());
    for (auto i : indices)
        out.push_back(catalog[i]);
    return FeatureCatalog(std::move(out));
}

FeatureCatalog select_feature_set(const FeatureCatalog& catalog, FeatureSet set)
{
    if (set == FeatureSet::CAPF)
        return catalog;
    return select_features(catalog, feature_set_indices(catalog, set));
}

} // namespace droidtriage
