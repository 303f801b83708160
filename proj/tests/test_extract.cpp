#include "droidtriage/error.hpp"
#include "droidtriage/extract.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <fstream>

using namespace droidtriage;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

Eigen::Index bit(const std::string& name) { return static_cast<Eigen::Index>(*default_catalog().find(name)); }

} // namespace

TEST_CASE("permission in the manifest sets its bit")
{
    fixtures::TempDir app("app");
    write_file(app / "AndroidManifest.xml",
               "<manifest>\n  <uses-permission android:name=\"android.permission.SEND_SMS\"/>\n</manifest>\n");
    const auto r = scan_app(app.path(), default_catalog());
    CHECK(r.bits(bit("SEND_SMS")) == 1);
    CHECK(r.bits.cast<int>().sum() == 1);
    CHECK(r.warnings.empty());
}

TEST_CASE("empty manifest gives an all-zero vector")
{
    fixtures::TempDir app("app");
    write_file(app / "AndroidManifest.xml", "");
    const auto r = scan_app(app.path(), default_catalog());
    CHECK(r.bits.size() == 179);
    CHECK(r.bits.cast<int>().sum() == 0);
}

TEST_CASE("code file token sets the api bit")
{
    fixtures::TempDir app("app");
    write_file(app / "AndroidManifest.xml", "");
    write_file(app / "smali/com/x/Shell.smali", "invoke-static {v0}, Lcom/x/Exec;->createSubprocess(I)V\n");
    const auto r = scan_app(app.path(), default_catalog());
    CHECK(r.bits(bit("createSubprocess")) == 1);
}

TEST_CASE("permission tokens respect identifier boundaries")
{
    CHECK(contains_token("android.permission.SEND_SMS\"", "SEND_SMS"));
    CHECK_FALSE(contains_token("android.permission.SEND_SMS_EXTRA", "SEND_SMS"));
    CHECK_FALSE(contains_token("XSEND_SMS", "SEND_SMS"));
    CHECK(contains_token("SEND_SMS", "SEND_SMS"));
    CHECK(contains_token("SEND_SMS_EXTRA SEND_SMS", "SEND_SMS"));
    CHECK_FALSE(contains_token("anything", ""));
}

TEST_CASE("permissions in code files and commands in the manifest do not count")
{
    fixtures::TempDir app("app");
    write_file(app / "AndroidManifest.xml", "chmod");
    write_file(app / "res/strings.xml", "android.permission.SEND_SMS");
    const auto r = scan_app(app.path(), default_catalog());
    CHECK(r.bits.cast<int>().sum() == 0);
}

TEST_CASE("missing manifest warns but still scans code")
{
    fixtures::TempDir app("app");
    write_file(app / "lib/armeabi/libx.so", std::string("\x7f" "ELF\0\0/system/bin/sh\0", 20));
    const auto r = scan_app(app.path(), default_catalog());
    CHECK(r.warnings.size() == 1);
    CHECK(r.bits(bit("/system/bin/sh")) == 1);
}

TEST_CASE("unreadable root is an error")
{
    CHECK_THROWS_AS(scan_app("/nonexistent/app", default_catalog()), Error);
    fixtures::TempDir dir("app");
    write_file(dir / "file.txt", "x");
    CHECK_THROWS_AS(scan_app(dir / "file.txt", default_catalog()), Error);
}

TEST_CASE("scanning a tree built from a vector reproduces the vector")
{
    const auto& cat = default_catalog();
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        FeatureVector want = FeatureVector::Zero(static_cast<Eigen::Index>(cat.size()));
        fixtures::TempDir app("inverse");
        std::string manifest = "<manifest>\n";
        std::size_t file_no = 0;
        for (std::size_t i = 0; i < cat.size(); ++i) {
            if (!rng.bernoulli(0.2))
                continue;
            want(static_cast<Eigen::Index>(i)) = 1;
            if (cat[i].category == FeatureCategory::Permission)
                manifest += "  <uses-permission android:name=\"android.permission." + cat[i].pattern + "\"/>\n";
            else
                write_file(app / ("code/f" + std::to_string(file_no++) + ".txt"), "\n" + cat[i].pattern + "\n");
        }
        write_file(app / "AndroidManifest.xml", manifest + "</manifest>\n");
        const auto got = scan_app(app.path(), cat).bits;
        // Some patterns contain others (e.g. "mount" in "remount"), so the
        // scan may only add bits, never drop them.
        for (Eigen::Index i = 0; i < want.size(); ++i)
            if (want(i))
                CHECK_MESSAGE(got(i) == 1, cat[static_cast<std::size_t>(i)].name);
        for (Eigen::Index i = 0; i < want.size(); ++i) {
            if (!want(i) && got(i)) {
                bool implied = false;
                for (std::size_t j = 0; j < cat.size(); ++j)
                    implied |= want(static_cast<Eigen::Index>(j)) &&
                               cat[j].pattern.find(cat[static_cast<std::size_t>(i)].pattern) != std::string::npos;
                CHECK_MESSAGE(implied, cat[static_cast<std::size_t>(i)].name);
            }
        }
    }
}

TEST_CASE("adding files never clears a bit")
{
    fixtures::TempDir app("mono");
    write_file(app / "AndroidManifest.xml", "android.permission.INTERNET");
    write_file(app / "a.txt", "chmod 777");
    const auto before = scan_app(app.path(), default_catalog()).bits;
    write_file(app / "b.txt", "busybox mount");
    write_file(app / "deep/er/c.txt", "nothing interesting");
    const auto after = scan_app(app.path(), default_catalog()).bits;
    CHECK(((before.array() == 1) <= (after.array() == 1)).all());
    CHECK(after(bit("busybox")) == 1);
}
