#include "droidtriage/crossval.hpp"
#include "droidtriage/error.hpp"
#include "droidtriage/folds.hpp"
#include "droidtriage/metrics.hpp"
#include "droidtriage/report.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace droidtriage;

namespace {

constexpr auto M = Label::Malware;
constexpr auto B = Label::Benign;

ConfusionMatrix cm(std::uint64_t bb, std::uint64_t bs, std::uint64_t sb, std::uint64_t ss) { return {bb, bs, sb, ss}; }

} // namespace

TEST_CASE("confusion counts")
{
    const std::vector<Label> truth{M, M, B, B};
    const std::vector<Label> pred{M, B, B, M};
    CHECK(confusion(truth, pred) == cm(1, 1, 1, 1));
    CHECK(confusion(truth, truth) == cm(2, 0, 0, 2));
    const std::vector<Label> all_benign(4, B);
    CHECK(confusion(truth, all_benign) == cm(2, 0, 2, 0));
    CHECK_THROWS_AS(confusion(truth, std::vector<Label>{M}), std::invalid_argument);
    CHECK_THROWS_AS(confusion(std::vector<Label>{}, std::vector<Label>{}), std::invalid_argument);
}

TEST_CASE("worked metrics example")
{
    const auto r = metrics(cm(380, 20, 15, 285));
    CHECK(r.tpr == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(r.fpr == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(r.acc == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(r.err == doctest::Approx(0.05).epsilon(1e-15));
    REQUIRE(r.precision);
    CHECK(*r.precision == doctest::Approx(0.934426).epsilon(1e-6));
    CHECK(*r.precision == 285.0 / 305.0);
}

TEST_CASE("perfect and all-benign classifiers")
{
    const auto perfect = metrics(cm(10, 0, 0, 7));
    CHECK(perfect.tpr == 1.0);
    CHECK(perfect.tnr == 1.0);
    CHECK(perfect.acc == 1.0);
    CHECK(*perfect.precision == 1.0);
    CHECK(perfect.fpr == 0.0);
    CHECK(perfect.fnr == 0.0);
    CHECK(perfect.err == 0.0);
    const auto lazy = metrics(cm(10, 0, 7, 0));
    CHECK_FALSE(lazy.precision);
    CHECK(lazy.tpr == 0.0);
    CHECK(lazy.tnr == 1.0);
    CHECK_THROWS_AS(metrics(ConfusionMatrix{}), std::invalid_argument);
}

TEST_CASE("rates of an absent class are undefined")
{
    const auto r = metrics(cm(5, 1, 0, 0));
    CHECK(std::isnan(r.tpr));
    CHECK(std::isnan(r.fnr));
    CHECK(r.tnr == 5.0 / 6.0);
}

TEST_CASE("metric identities and the exact oracle")
{
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const auto c = cm(rng.below(500), rng.below(500), rng.below(500), rng.below(500));
        if (c.total() == 0)
            continue;
        const auto r = metrics(c);
        CHECK(oracles::agrees(r, oracles::exact_rates(c)));
        CHECK(std::abs(r.acc + r.err - 1) <= 1e-12);
        if (c.sus_ben + c.sus_sus)
            CHECK(std::abs(r.tpr + r.fnr - 1) <= 1e-12);
        if (c.ben_ben + c.ben_sus)
            CHECK(std::abs(r.tnr + r.fpr - 1) <= 1e-12);
    }
}

TEST_CASE("worked AUC example is exactly 3/4")
{
    const std::vector<double> scores{0.9, 0.4, 0.6, 0.1};
    const std::vector<Label> truth{M, M, B, B};
    CHECK(roc_auc(scores, truth).auc == 0.75);
    CHECK(mann_whitney_auc(scores, truth) == 0.75);
}

TEST_CASE("separated and anti-separated scores")
{
    const std::vector<Label> truth{M, M, B, B};
    CHECK(roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, truth).auc == 1.0);
    CHECK(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, truth).auc == 0.0);
    CHECK(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, truth).auc == 0.5);
}

TEST_CASE("ROC preconditions")
{
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<Label>{M, M}), Error);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1}, std::vector<Label>{M, B}), std::invalid_argument);
}

TEST_CASE("ROC staircase: endpoints, monotone, tie groups enter together")
{
    const std::vector<double> scores{0.9, 0.7, 0.7, 0.7, 0.2, 0.1};
    const std::vector<Label> truth{M, M, B, B, M, B};
    const auto roc = roc_auc(scores, truth);
    REQUIRE(roc.points.size() == 5);
    CHECK(roc.points.front().fpr == 0.0);
    CHECK(roc.points.front().tpr == 0.0);
    CHECK(std::isinf(roc.points.front().threshold));
    CHECK(roc.points.back().fpr == 1.0);
    CHECK(roc.points.back().tpr == 1.0);
    CHECK(roc.points[2].threshold == 0.7);
    CHECK(roc.points[2].fpr == 2.0 / 3.0);
    CHECK(roc.points[2].tpr == 2.0 / 3.0);
    CHECK(roc.auc == oracles::to_double(oracles::pairwise_auc(scores, truth)));
}

TEST_CASE("trapezoid and rank-sum AUC agree on random tied scores")
{
    Rng rng(1);
    for (int seed = 0; seed < 100; ++seed) {
        const std::size_t n = 2 + rng.below(200);
        std::vector<double> scores(n);
        std::vector<Label> truth(n);
        const auto levels = 1 + rng.below(12);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
            truth[i] = i == 0 ? M : i == 1 ? B : rng.bernoulli(0.4) ? M : B;
        }
        const auto roc = roc_auc(scores, truth);
        CHECK(std::abs(roc.auc - mann_whitney_auc(scores, truth)) <= 1e-12);
        CHECK(roc.auc == oracles::to_double(oracles::pairwise_auc(scores, truth)));
        for (std::size_t i = 1; i < roc.points.size(); ++i) {
            CHECK(roc.points[i].fpr >= roc.points[i - 1].fpr);
            CHECK(roc.points[i].tpr >= roc.points[i - 1].tpr);
        }
    }
}

TEST_CASE("stratified folds over the published class sizes")
{
    std::vector<Label> labels(3938, B);
    labels.resize(6863, M);
    const auto folds = stratified_folds(labels, 10, 1);
    REQUIRE(folds.size() == 10);
    std::vector<int> seen(labels.size(), 0);
    for (const auto& fold : folds) {
        std::size_t b = 0, m = 0;
        for (auto i : fold) {
            ++seen[i];
            (labels[i] == M ? m : b) += 1;
        }
        CHECK((b == 393 || b == 394));
        CHECK((m == 292 || m == 293));
        CHECK(std::abs(static_cast<double>(b) - 393.8) < 1);
        CHECK(std::abs(static_cast<double>(m) - 292.5) < 1);
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    CHECK(stratified_folds(labels, 10, 1) == folds);
    CHECK(stratified_folds(labels, 10, 2) != folds);
}

TEST_CASE("tiny folds and fold-count preconditions")
{
    const std::vector<Label> labels{B, M, B, M};
    const auto folds = stratified_folds(labels, 2, 3);
    for (const auto& fold : folds) {
        REQUIRE(fold.size() == 2);
        CHECK(labels[fold[0]] != labels[fold[1]]);
    }
    CHECK_THROWS_AS(stratified_folds(labels, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(stratified_folds(labels, 3, 3), std::invalid_argument);
    CHECK(complement({1, 3}, 5) == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("naive Bayes cross-validates perfectly on a separable set")
{
    std::vector<std::vector<int>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        rows.push_back({i % 2, 1 - i % 2, (i / 2) % 2});
        labels.push_back(i % 2);
    }
    const auto d = fixtures::make_dataset(rows, labels);
    const auto r = cross_validate(d, {.kind = AlgoKind::NaiveBayes}, 10, 1);
    CHECK(r.report.acc == 1.0);
    CHECK(r.roc.auc == 1.0);
}

TEST_CASE("cross-validation bookkeeping and determinism")
{
    const auto d = fixtures::random_dataset(200, 8, 6);
    for (auto kind : {AlgoKind::NaiveBayes, AlgoKind::DecisionTree, AlgoKind::RandomTree, AlgoKind::RandomForest,
                      AlgoKind::SimpleLogistic}) {
        AlgoDescriptor algo{.kind = kind, .max_iterations = 20};
        const auto a = cross_validate(d, algo, 5, 3);
        ConfusionMatrix sum;
        for (const auto& c : a.fold_confusion)
            sum += c;
        CHECK(sum == a.pooled);
        CHECK(a.pooled.total() == d.size());
        CHECK(a.scores.size() == d.size());
        CHECK(confusion(d.labels, a.predicted) == a.pooled);
        CHECK(a.roc.auc == roc_auc(a.scores, d.labels).auc);
        const auto b = cross_validate(d, algo, 5, 3, 4);
        CHECK(a.scores == b.scores);
        CHECK(a.pooled == b.pooled);
    }
}

TEST_CASE("training failures name the fold")
{
    // Every training split keeps both classes, but naive Bayes rejects alpha = 0 up front.
    const auto d = fixtures::random_dataset(40, 3, 2);
    CHECK_THROWS_AS(cross_validate(d, {.kind = AlgoKind::NaiveBayes, .alpha = 0.0}), std::invalid_argument);
    // Folds cannot exceed the smaller class.
    CHECK_THROWS_AS(cross_validate(d, {.kind = AlgoKind::NaiveBayes}, 100, 1), std::invalid_argument);
}

TEST_CASE("fold errors carry the fold index")
{
    // sl's internal 5-fold split needs 5 instances per class in each training set.
    const auto d = fixtures::make_dataset({{1}, {0}, {1}, {0}, {1}, {0}, {1}, {0}}, {1, 0, 1, 0, 1, 0, 1, 0});
    CHECK_THROWS_WITH(cross_validate(d, {.kind = AlgoKind::SimpleLogistic}, 2, 1), doctest::Contains("fold "));
}

TEST_CASE("comparison table over algorithms and feature sets")
{
    const auto d = fixtures::calibrated_synthetic(11);
    const auto small = subset(d, [] {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < 6863; i += 7)
            rows.push_back(i);
        return rows;
    }());
    std::vector<AlgoDescriptor> algos;
    for (auto kind : {AlgoKind::NaiveBayes, AlgoKind::DecisionTree, AlgoKind::RandomTree, AlgoKind::RandomForest,
                      AlgoKind::SimpleLogistic})
        algos.push_back({.kind = kind, .max_iterations = 30});
    const auto rows = compare(small, algos, {FeatureSet::CAPF}, 5, 1);
    CHECK(rows.size() == 5);
    std::ostringstream out;
    write_report_csv(rows, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "algo,feature_set,features,TPR,TNR,FPR,FNR,ACC,ERR,precision,AUC");
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(lines == 5);

    const auto single = compare(small, {algos[0]}, {FeatureSet::PF, FeatureSet::AF, FeatureSet::CAPF}, 5, 1);
    REQUIRE(single.size() == 3);
    CHECK(single[0].features == 125);
    CHECK(single[1].features == 54);
    CHECK(single[2].features == 179);
    CHECK(single[0].feature_set == "pf");
}

TEST_CASE("report CSV formatting")
{
    ComparisonRow row{"nb", "CAPF", 179, metrics(cm(10, 0, 7, 0)), 0.5};
    std::ostringstream out;
    write_report_csv(std::span(&row, 1), out);
    CHECK(out.str() == "algo,feature_set,features,TPR,TNR,FPR,FNR,ACC,ERR,precision,AUC\n"
                       "nb,CAPF,179,0.000,1.000,0.000,1.000,0.588,0.412,undefined,0.500\n");
}

TEST_CASE("ROC CSV and SVG")
{
    const std::vector<double> scores{0.9, 0.4, 0.6, 0.1};
    const std::vector<Label> truth{M, M, B, B};
    const auto roc = roc_auc(scores, truth);
    std::ostringstream out;
    write_roc_csv(roc, out);
    CHECK(out.str().rfind("fpr,tpr,threshold\n0,0,inf\n", 0) == 0);
    const auto svg = roc_svg(roc, "demo");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("AUC = 0.750") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
