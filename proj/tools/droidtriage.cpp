// droidtriage: static-feature Android malware triage pipeline.
//
//   synth    draw a labelled dataset from a synthetic spec
//   extract  scan unpacked app directories into feature vectors
//   rank     mutual-information feature ranking
//   train    fit a classifier and save it
//   predict  score a dataset with a saved model
//   crossval stratified k-fold evaluation of one classifier
//   compare  cross-validated comparison table
//   roc      ROC curve (CSV, optional SVG) of a saved model
//
// Exit codes: 0 success, 1 usage error, 2 data or model error.

#include "droidtriage/catalog.hpp"
#include "droidtriage/crossval.hpp"
#include "droidtriage/dataset.hpp"
#include "droidtriage/error.hpp"
#include "droidtriage/extract.hpp"
#include "droidtriage/model.hpp"
#include "droidtriage/model_io.hpp"
#include "droidtriage/ranking.hpp"
#include "droidtriage/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace dt = droidtriage;

namespace {

struct CommonOptions {
    std::string catalog;
    std::string feature_set = "capf";

    dt::FeatureCatalog load_catalog() const
    {
        return catalog.empty() ? dt::default_catalog() : dt::load_catalog(catalog);
    }
};

struct AlgoOptions {
    std::string algo = "rf";
    std::size_t trees = 10;
    std::size_t k = 0;
    double bootstrap = 1.0;
    bool no_bootstrap = false;
    double alpha = 1.0;
    bool prune = true;
    std::string criterion = "entropy";
    std::size_t max_iter = 200;
    std::size_t cv_folds = 5;
    std::uint64_t seed = 1;

    dt::AlgoDescriptor descriptor(const std::string& tag) const
    {
        dt::AlgoDescriptor d;
        d.kind = dt::parse_algo_kind(tag);
        d.alpha = alpha;
        d.criterion = criterion == "gini" ? dt::Criterion::Gini : dt::Criterion::Entropy;
        d.prune = prune;
        d.k = k;
        d.trees = trees;
        d.bootstrap_fraction = bootstrap;
        d.bootstrap = !no_bootstrap;
        d.max_iterations = max_iter;
        d.cv_folds = cv_folds;
        d.seed = seed;
        d.validate();
        return d;
    }
};

void add_algo_flags(CLI::App* cmd, AlgoOptions& o, bool multiple_algos)
{
    if (!multiple_algos)
        cmd->add_option("--algo", o.algo, "Classifier: nb, dt, rt, rf, sl")
            ->check(CLI::IsMember({"nb", "dt", "rt", "rf", "sl"}))
            ->capture_default_str();
    cmd->add_option("--trees", o.trees, "Random forest size T")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--k", o.k, "Random features per split (0 = floor(log2 F) + 1)")->capture_default_str();
    cmd->add_option("--bootstrap", o.bootstrap, "Bootstrap sample size as a fraction of N")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_flag("--no-bootstrap", o.no_bootstrap, "Train every forest tree on the full data");
    cmd->add_option("--alpha", o.alpha, "Naive Bayes Laplace smoothing")->capture_default_str();
    cmd->add_flag("--prune,!--no-prune", o.prune, "Reduced-error pruning for dt")->capture_default_str();
    cmd->add_option("--criterion", o.criterion, "Split criterion for dt")
        ->check(CLI::IsMember({"entropy", "gini"}))
        ->capture_default_str();
    cmd->add_option("--max-iter", o.max_iter, "LogitBoost iteration cap for sl")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--cv-folds", o.cv_folds, "Internal folds used by sl to pick the iteration count")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write)
{
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw dt::Error("cannot write '" + path + "'");
    write(out);
    if (!out)
        throw dt::Error("I/O error writing '" + path + "'");
}

dt::Dataset load_dataset(const std::string& path, const CommonOptions& common, std::optional<std::size_t> top = {})
{
    auto data = dt::read_csv(std::filesystem::path(path), common.load_catalog());
    data = dt::project(data, dt::parse_feature_set(common.feature_set));
    if (top)
        data = dt::project(data, dt::top_k(dt::rank_features(data), *top));
    return data;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Static-feature Android malware triage: extract, rank, train and evaluate classifiers"};
    app.require_subcommand(1);
    unsigned workers = 1;
    app.add_option("--workers", workers, "Worker threads for forests and cross-validation")
        ->check(CLI::PositiveNumber);

    CommonOptions common;
    auto add_common = [&common](CLI::App* cmd, bool feature_set) {
        cmd->add_option("--catalog", common.catalog, "Feature catalog CSV (default: built-in 179 features)");
        if (feature_set)
            cmd->add_option("--feature-set", common.feature_set, "Feature subset: pf, af or capf")
                ->check(CLI::IsMember({"pf", "af", "capf"}))
                ->capture_default_str();
    };

    // synth
    std::string spec_path, out_path, data_path, model_path, svg_path;
    std::uint64_t seed = 1;
    auto* synth = app.add_subcommand("synth", "Draw a labelled dataset from a synthetic spec");
    synth->add_option("--spec", spec_path, "Synthetic spec file")->required();
    synth->add_option("--seed", seed, "Random seed")->capture_default_str();
    synth->add_option("--out", out_path, "Output dataset CSV (default: stdout)");
    add_common(synth, false);

    // extract
    std::vector<std::string> app_dirs;
    std::string label_text;
    auto* extract = app.add_subcommand("extract", "Scan unpacked application directories");
    extract->add_option("--app", app_dirs, "Unpacked application directory (repeatable)")->required();
    extract->add_option("--label", label_text, "Label every row (adds the class column)")
        ->check(CLI::IsMember({"benign", "malware"}));
    extract->add_option("--out", out_path, "Output CSV (default: stdout)");
    add_common(extract, false);

    // rank
    std::optional<std::size_t> top;
    auto* rank = app.add_subcommand("rank", "Rank features by mutual information with the label");
    rank->add_option("--data", data_path, "Dataset CSV")->required();
    rank->add_option("--top", top, "Keep only the k best features")->check(CLI::PositiveNumber);
    rank->add_option("--out", out_path, "Ranking CSV (default: stdout)");
    add_common(rank, true);

    // train
    AlgoOptions algo;
    auto* train = app.add_subcommand("train", "Train a classifier and save it");
    add_algo_flags(train, algo, false);
    train->add_option("--data", data_path, "Training dataset CSV")->required();
    train->add_option("--model", model_path, "Output model file")->required();
    add_common(train, true);

    // predict
    auto* predict = app.add_subcommand("predict", "Score a dataset with a saved model");
    predict->add_option("--model", model_path, "Model file")->required();
    predict->add_option("--data", data_path, "Dataset CSV (class column optional)")->required();
    predict->add_option("--out", out_path, "Predictions CSV (default: stdout)");
    add_common(predict, true);

    // crossval
    std::size_t folds = 10;
    auto* crossval = app.add_subcommand("crossval", "Stratified k-fold evaluation of one classifier");
    add_algo_flags(crossval, algo, false);
    crossval->add_option("--data", data_path, "Dataset CSV")->required();
    crossval->add_option("--folds", folds, "Number of folds")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    crossval->add_option("--top", top, "Restrict to the k features with highest mutual information")
        ->check(CLI::PositiveNumber);
    crossval->add_option("--out", out_path, "Report CSV (default: stdout)");
    add_common(crossval, true);

    // compare
    std::vector<std::string> algos{"nb", "dt", "rt", "rf", "sl"};
    std::vector<std::string> sets{"capf"};
    auto* compare = app.add_subcommand("compare", "Cross-validated comparison table");
    compare->add_option("--algo", algos, "Classifiers (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({"nb", "dt", "rt", "rf", "sl"}))
        ->capture_default_str();
    add_algo_flags(compare, algo, true);
    compare->add_option("--feature-set", sets, "Feature sets (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({"pf", "af", "capf"}))
        ->capture_default_str();
    compare->add_option("--data", data_path, "Dataset CSV")->required();
    compare->add_option("--folds", folds, "Number of folds")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    compare->add_option("--out", out_path, "Report CSV (default: stdout)");
    add_common(compare, false);

    // roc
    auto* roc = app.add_subcommand("roc", "ROC curve of a saved model on labelled data");
    roc->add_option("--model", model_path, "Model file")->required();
    roc->add_option("--data", data_path, "Labelled dataset CSV")->required();
    roc->add_option("--out", out_path, "ROC CSV (default: stdout)");
    roc->add_option("--svg", svg_path, "Also write an SVG plot here");
    add_common(roc, true);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return 1;
    }

    try {
        if (*synth) {
            const auto catalog = common.load_catalog();
            const auto spec = dt::load_synthetic_spec(spec_path, catalog);
            const auto data = dt::synthesize(spec, catalog, seed);
            emit(out_path, [&](std::ostream& out) { dt::write_csv(data, out); });
        }
        else if (*extract) {
            const auto catalog = common.load_catalog();
            dt::BitMatrix rows(static_cast<Eigen::Index>(app_dirs.size()), static_cast<Eigen::Index>(catalog.size()));
            for (std::size_t i = 0; i < app_dirs.size(); ++i) {
                auto result = dt::scan_app(app_dirs[i], catalog);
                for (const auto& w : result.warnings)
                    std::cerr << "warning: " << w << '\n';
                rows.row(static_cast<Eigen::Index>(i)) = result.bits;
            }
            emit(out_path, [&](std::ostream& out) {
                for (std::size_t j = 0; j < catalog.size(); ++j)
                    out << (j ? "," : "") << catalog[j].name;
                out << (label_text.empty() ? "\n" : ",class\n");
                for (Eigen::Index i = 0; i < rows.rows(); ++i) {
                    for (Eigen::Index j = 0; j < rows.cols(); ++j)
                        out << (j ? "," : "") << int(rows(i, j));
                    out << (label_text.empty() ? "" : "," + label_text) << '\n';
                }
            });
        }
        else if (*rank) {
            const auto data = load_dataset(data_path, common);
            const auto ranking = dt::rank_features(data);
            if (top && *top > ranking.size())
                throw std::invalid_argument("--top " + std::to_string(*top) + " exceeds the " +
                                            std::to_string(ranking.size()) + " ranked features");
            emit(out_path, [&](std::ostream& out) { dt::write_ranking_csv(ranking, out, top.value_or(0)); });
        }
        else if (*train) {
            const auto data = load_dataset(data_path, common);
            const auto model = dt::train(algo.descriptor(algo.algo), data, workers);
            dt::save_model(model, data.catalog, std::filesystem::path(model_path));
            std::cout << model_path << '\n';
        }
        else if (*predict) {
            const auto loaded = dt::load_model(std::filesystem::path(model_path));
            const auto catalog = dt::select_feature_set(common.load_catalog(), dt::parse_feature_set(common.feature_set));
            dt::check_fingerprint(loaded, catalog);
            // Rows are read against the full catalog, then narrowed like training data.
            const auto full = common.load_catalog();
            auto rows = dt::read_feature_csv(data_path, full);
            const auto columns = dt::feature_set_indices(full, dt::parse_feature_set(common.feature_set));
            dt::BitMatrix narrowed(rows.features.rows(), static_cast<Eigen::Index>(columns.size()));
            for (std::size_t j = 0; j < columns.size(); ++j)
                narrowed.col(static_cast<Eigen::Index>(j)) = rows.features.col(static_cast<Eigen::Index>(columns[j]));
            const auto predictions = dt::predict_all(loaded.model, narrowed, workers);
            emit(out_path, [&](std::ostream& out) { dt::write_predictions_csv(predictions, out); });
        }
        else if (*crossval) {
            const auto data = load_dataset(data_path, common, top);
            const auto result = dt::cross_validate(data, algo.descriptor(algo.algo), folds, algo.seed, workers);
            const std::vector<dt::ComparisonRow> rows{dt::summarize(result, common.feature_set, data.num_features())};
            emit(out_path, [&](std::ostream& out) { dt::write_report_csv(rows, out); });
        }
        else if (*compare) {
            const auto data = load_dataset(data_path, common);
            std::vector<dt::AlgoDescriptor> descriptors;
            for (const auto& tag : algos)
                descriptors.push_back(algo.descriptor(tag));
            std::vector<dt::FeatureSet> feature_sets;
            for (const auto& s : sets)
                feature_sets.push_back(dt::parse_feature_set(s));
            const auto rows = dt::compare(data, descriptors, feature_sets, folds, algo.seed, workers);
            emit(out_path, [&](std::ostream& out) { dt::write_report_csv(rows, out); });
        }
        else if (*roc) {
            const auto loaded = dt::load_model(std::filesystem::path(model_path));
            const auto data = load_dataset(data_path, common);
            dt::check_fingerprint(loaded, data.catalog);
            const auto predictions = dt::predict_all(loaded.model, data.features, workers);
            std::vector<double> scores;
            for (const auto& p : predictions)
                scores.push_back(p.score);
            const auto curve = dt::roc_auc(scores, data.labels);
            emit(out_path, [&](std::ostream& out) { dt::write_roc_csv(curve, out); });
            if (!svg_path.empty()) {
                const auto title = "ROC: " + std::string(dt::to_string(dt::kind_of(loaded.model))) + " (" +
                                   common.feature_set + ")";
                emit(svg_path, [&](std::ostream& out) { out << dt::roc_svg(curve, title); });
            }
        }
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
