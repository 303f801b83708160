#pragma once

#include "droidtriage/catalog.hpp"
#include "droidtriage/dataset.hpp"
#include "droidtriage/rng.hpp"

#include <unistd.h>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

namespace dt = droidtriage;

inline constexpr std::size_t kBenignTotal = 3938;
inline constexpr std::size_t kMalwareTotal = 2925;

struct PublishedRow {
    const char* name;
    std::size_t benign;
    std::size_t malware;
    double score;
};

// Top-20 mutual-information ranking as published (counts over 3938 benign / 2925 malware apps).
inline constexpr std::array<PublishedRow, 20> kPublishedTop20{{
    {"SEND_SMS", 128, 1557, 0.260525},
    {"RECEIVE_SMS", 127, 976, 0.126554},
    {"READ_SMS", 140, 900, 0.107046},
    {"remount", 30, 628, 0.098938},
    {"/system/app", 55, 687, 0.098179},
    {"chown", 51, 668, 0.096293},
    {"createSubprocess", 5, 531, 0.096111},
    {"WRITE_SMS", 89, 720, 0.090689},
    {"/system/bin/sh", 36, 596, 0.089475},
    {"mount", 146, 810, 0.088369},
    {"abortBroadcast", 48, 618, 0.08799},
    {"READ_PHONE_STATE", 2016, 2378, 0.072633},
    {"TelephonyManager", 2168, 2451, 0.069811},
    {"TelephonyManager _getSubscriberId", 480, 1094, 0.063550},
    {"chmod", 459, 999, 0.053325},
    {"Ljava_net_URLDecoder", 1539, 445, 0.051456},
    {"ACCESS_NETWORK_STATE", 2973, 1453, 0.051394},
    {"RESTART_PACKAGES", 142, 597, 0.050407},
    {"CHANGE_WIFI_STATE", 297, 756, 0.048716},
    {"Ljavax_crypto_spec_SecretKeySpec", 1719, 592, 0.044834},
}};

/// Default catalog, benign block then malware block, with exactly the
/// published counts for the 20 ranked features and zeros elsewhere.
inline dt::Dataset exact_count_dataset()
{
    const auto& catalog = dt::default_catalog();
    const auto n = kBenignTotal + kMalwareTotal;
    dt::BitMatrix bits = dt::BitMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(catalog.size()));
    for (const auto& row : kPublishedTop20) {
        const auto j = static_cast<Eigen::Index>(*catalog.find(row.name));
        bits.col(j).segment(0, static_cast<Eigen::Index>(row.benign)).setOnes();
        bits.col(j).segment(static_cast<Eigen::Index>(kBenignTotal), static_cast<Eigen::Index>(row.malware)).setOnes();
    }
    std::vector<dt::Label> labels(n, dt::Label::Benign);
    std::fill(labels.begin() + kBenignTotal, labels.end(), dt::Label::Malware);
    return {catalog, std::move(bits), std::move(labels)};
}

/// API-category catalog named f0..f{n-1}.
inline dt::FeatureCatalog numbered_catalog(std::size_t n, const std::string& prefix = "f")
{
    std::vector<dt::FeatureDef> defs;
    for (std::size_t i = 0; i < n; ++i)
        defs.push_back({prefix + std::to_string(i), dt::FeatureCategory::Api, prefix + std::to_string(i)});
    return dt::FeatureCatalog(std::move(defs));
}

/// Dataset from rows of 0/1 and labels (1 = malware), over numbered_catalog.
inline dt::Dataset make_dataset(const std::vector<std::vector<int>>& rows, const std::vector<int>& labels)
{
    const std::size_t f = rows.empty() ? 0 : rows.front().size();
    dt::BitMatrix bits(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(f));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < f; ++j)
            bits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<std::uint8_t>(rows[i][j]);
    std::vector<dt::Label> l;
    for (int v : labels)
        l.push_back(v ? dt::Label::Malware : dt::Label::Benign);
    return {numbered_catalog(f), std::move(bits), std::move(l)};
}

/// Random bits at rate `p`, random labels with both classes guaranteed.
inline dt::Dataset random_dataset(std::size_t n, std::size_t f, std::uint64_t seed, double p = 0.3)
{
    dt::Rng rng(seed);
    dt::BitMatrix bits(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
    for (Eigen::Index i = 0; i < bits.rows(); ++i)
        for (Eigen::Index j = 0; j < bits.cols(); ++j)
            bits(i, j) = rng.bernoulli(p);
    std::vector<dt::Label> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = (i < 2 ? i == 1 : rng.bernoulli(0.5)) ? dt::Label::Malware : dt::Label::Benign;
    return {numbered_catalog(f), std::move(bits), std::move(labels)};
}

/// Two XOR features (xa, xb) plus `noise` uniform features, all at rate 0.5.
inline dt::Dataset xor_dataset(std::size_t n_benign, std::size_t n_malware, std::size_t noise, double q,
                               std::uint64_t seed)
{
    std::vector<dt::FeatureDef> defs{{"xa", dt::FeatureCategory::Api, "xa"}, {"xb", dt::FeatureCategory::Api, "xb"}};
    for (std::size_t i = 0; i < noise; ++i)
        defs.push_back({"noise" + std::to_string(i), dt::FeatureCategory::Command, "noise" + std::to_string(i)});
    const dt::FeatureCatalog catalog(std::move(defs));
    auto spec = dt::SyntheticSpec::uniform(catalog.size(), 0.5, n_benign, n_malware);
    spec.xor_interaction = dt::XorInteraction{0, 1, q};
    return dt::synthesize(spec, catalog, seed);
}

/// Independent Bernoulli data calibrated to the published rates, padding at 0.05.
inline dt::Dataset calibrated_synthetic(std::uint64_t seed)
{
    const auto& catalog = dt::default_catalog();
    auto spec = dt::SyntheticSpec::uniform(catalog.size(), dt::kDefaultBackgroundRate, kBenignTotal, kMalwareTotal);
    for (const auto& row : kPublishedTop20) {
        const auto j = static_cast<Eigen::Index>(*catalog.find(row.name));
        spec.p_benign(j) = static_cast<double>(row.benign) / kBenignTotal;
        spec.p_malware(j) = static_cast<double>(row.malware) / kMalwareTotal;
    }
    return dt::synthesize(spec, catalog, seed);
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("droidtriage-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace fixtures
