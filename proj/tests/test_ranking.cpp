#include "droidtriage/error.hpp"
#include "droidtriage/ranking.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace droidtriage;

namespace {

FeatureClassCounts counts(std::uint64_t pb, std::uint64_t pm, std::uint64_t b = 3938, std::uint64_t m = 2925)
{
    return {pb, pm, b, m};
}

/// Independent oracle: entropy(label) - conditional entropy(label | bit), natural log then /ln 2.
double information_gain(double pb, double pm, double b, double m)
{
    const auto h = [](double a, double c) {
        const double n = a + c;
        double s = 0;
        for (double x : {a, c})
            if (x > 0)
                s -= x / n * std::log(x / n);
        return s;
    };
    const double n = b + m;
    const double on = pb + pm;
    const double off = n - on;
    double cond = 0;
    if (on > 0)
        cond += on / n * h(pb, pm);
    if (off > 0)
        cond += off / n * h(b - pb, m - pm);
    return (h(b, m) - cond) / std::log(2.0);
}

} // namespace

TEST_CASE("published SEND_SMS and createSubprocess scores")
{
    CHECK(std::abs(mutual_information(counts(128, 1557)) - 0.2605) <= 1e-3);
    CHECK(std::abs(mutual_information(counts(5, 531)) - 0.0961) <= 1e-3);
    // Rounded to the published precision the published values come back exactly.
    CHECK(std::abs(mutual_information(counts(128, 1557)) - 0.260525) <= 5e-7);
    CHECK(std::abs(mutual_information(counts(5, 531)) - 0.096111) <= 5e-7);
}

TEST_CASE("identical rates give exactly zero")
{
    CHECK(mutual_information(counts(100, 50, 1000, 500)) == 0.0);
    CHECK(mutual_information(counts(0, 0, 10, 20)) == 0.0);
    CHECK(mutual_information(counts(10, 20, 10, 20)) == 0.0);
}

TEST_CASE("perfectly informative feature on a balanced set scores one bit")
{
    CHECK(mutual_information(counts(0, 50, 50, 50)) == doctest::Approx(1.0));
}

TEST_CASE("mutual information matches the information-gain oracle")
{
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto b = 1 + rng.below(200);
        const auto m = 1 + rng.below(200);
        const auto pb = rng.below(b + 1);
        const auto pm = rng.below(m + 1);
        const double mi = mutual_information(counts(pb, pm, b, m));
        CHECK(mi >= 0.0);
        CHECK(mi <= 1.0);
        CHECK(mi == doctest::Approx(information_gain(double(pb), double(pm), double(b), double(m))).epsilon(1e-9));
        CHECK(mi == doctest::Approx(mutual_information(counts(pm, pb, m, b))).epsilon(1e-12));
    }
}

TEST_CASE("zero instances is an error")
{
    CHECK_THROWS(mutual_information(counts(0, 0, 0, 0)));
}

TEST_CASE("exact-count dataset ranks SEND_SMS, RECEIVE_SMS, READ_SMS first")
{
    const auto ranking = rank_features(fixtures::exact_count_dataset());
    REQUIRE(ranking.size() == 179);
    CHECK(ranking[0].name == "SEND_SMS");
    CHECK(ranking[1].name == "RECEIVE_SMS");
    CHECK(ranking[2].name == "READ_SMS");
    CHECK(top_k(ranking, 1) == std::vector<std::string>{"SEND_SMS"});
    const auto all = top_k(ranking, ranking.size());
    CHECK(all.size() == 179);
    CHECK(all[3] == ranking[3].name);
    CHECK_THROWS_AS(top_k(ranking, 0), std::out_of_range);
    CHECK_THROWS_AS(top_k(ranking, 180), std::out_of_range);
}

TEST_CASE("dataset scores equal the count formula (two paths)")
{
    const auto d = fixtures::exact_count_dataset();
    const auto ranking = rank_features(d);
    for (const auto& row : fixtures::kPublishedTop20) {
        auto it = std::find_if(ranking.begin(), ranking.end(), [&](const auto& r) { return r.name == row.name; });
        REQUIRE(it != ranking.end());
        CHECK(it->score == mutual_information(counts(row.benign, row.malware)));
        CHECK(it->index == *d.catalog.find(row.name));
    }
}

TEST_CASE("constant features score zero; duplicates tie and sort by name")
{
    auto d = fixtures::make_dataset({{1, 0, 1, 1}, {1, 1, 1, 1}, {1, 0, 0, 0}, {1, 1, 0, 0}}, {1, 1, 0, 0});
    // f2 and f3 are identical columns.
    const auto r = rank_features(d);
    CHECK(r[0].name == "f2");
    CHECK(r[1].name == "f3");
    CHECK(r[0].score == r[1].score);
    CHECK(r[0].score == doctest::Approx(1.0));
    CHECK(r.back().score == 0.0);
    CHECK(r[2].name == "f0");
    CHECK(r[3].name == "f1");
    CHECK(r[2].score == 0.0);
}

TEST_CASE("single-class data cannot be ranked")
{
    CHECK_THROWS_AS(rank_features(fixtures::make_dataset({{1}, {0}}, {1, 1})), Error);
}

TEST_CASE("shuffled labels drive scores toward zero")
{
    auto d = fixtures::random_dataset(1000, 30, 17, 0.4);
    std::vector<Label> balanced(1000);
    for (std::size_t i = 0; i < 1000; ++i)
        balanced[i] = i % 2 ? Label::Malware : Label::Benign;
    Rng(99).shuffle(balanced.begin(), balanced.end());
    d.labels = balanced;
    const auto r = rank_features(d);
    double mean = 0;
    for (const auto& f : r)
        mean += f.score;
    CHECK(mean / static_cast<double>(r.size()) < 0.01);
}

TEST_CASE("ranking CSV format")
{
    const auto ranking = rank_features(fixtures::exact_count_dataset());
    std::ostringstream out;
    write_ranking_csv(ranking, out, 2);
    CHECK(out.str() == "rank,name,score\n1,SEND_SMS,0.260525\n2,RECEIVE_SMS,0.126554\n");
}
