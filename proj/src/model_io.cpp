#include "droidtriage/model_io.hpp"

#include "droidtriage/error.hpp"
#include "text.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace droidtriage {

namespace {

using text::format_exact;

void write_tree(const TreeModel& tree, std::ostream& out)
{
    out << "tree criterion=" << (tree.params.criterion == Criterion::Entropy ? "entropy" : "gini")
        << " prune=" << (tree.params.prune ? 1 : 0) << " k=" << tree.params.k << " seed=" << tree.params.seed
        << " nodes=" << tree.nodes.size() << '\n';
    // Nodes are already in pre-order; children follow their parent.
    for (const auto& node : tree.nodes) {
        if (node.is_leaf())
            out << "L " << node.counts.benign << ' ' << node.counts.malware << '\n';
        else
            out << "S " << node.feature << ' ' << node.counts.benign << ' ' << node.counts.malware << '\n';
    }
}

class Reader {
public:
    Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    std::vector<std::string> tokens()
    {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            const auto line = text::chomp(raw);
            if (line.empty())
                continue;
            std::vector<std::string> out;
            std::istringstream ss{std::string(line)};
            for (std::string t; ss >> t;)
                out.push_back(t);
            return out;
        }
        fail("unexpected end of model file");
    }

    /// Reads a line starting with `keyword` and returns its key=value pairs.
    std::map<std::string, std::string> record(const std::string& keyword)
    {
        const auto t = tokens();
        if (t.empty() || t[0] != keyword)
            fail("expected '" + keyword + "'");
        std::map<std::string, std::string> kv;
        for (std::size_t i = 1; i < t.size(); ++i) {
            const auto eq = t[i].find('=');
            if (eq == std::string::npos)
                fail("malformed field '" + t[i] + "'");
            kv[t[i].substr(0, eq)] = t[i].substr(eq + 1);
        }
        return kv;
    }

    template <typename T>
    T number(const std::string& s)
    {
        auto v = text::parse_number<T>(s);
        if (!v)
            fail("invalid number '" + s + "'");
        return *v;
    }

    template <typename T>
    T field(const std::map<std::string, std::string>& kv, const std::string& key)
    {
        auto it = kv.find(key);
        if (it == kv.end())
            fail("missing field '" + key + "'");
        return number<T>(it->second);
    }

    std::string field_text(const std::map<std::string, std::string>& kv, const std::string& key)
    {
        auto it = kv.find(key);
        if (it == kv.end())
            fail("missing field '" + key + "'");
        return it->second;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

TreeModel read_tree(Reader& r, std::size_t features)
{
    const auto kv = r.record("tree");
    TreeModel tree;
    tree.num_features = features;
    const auto criterion = r.field_text(kv, "criterion");
    if (criterion == "entropy")
        tree.params.criterion = Criterion::Entropy;
    else if (criterion == "gini")
        tree.params.criterion = Criterion::Gini;
    else
        r.fail("unknown criterion '" + criterion + "'");
    tree.params.prune = r.field<int>(kv, "prune") != 0;
    tree.params.k = r.field<std::size_t>(kv, "k");
    tree.params.seed = r.field<std::uint64_t>(kv, "seed");
    const auto n = r.field<std::size_t>(kv, "nodes");
    if (n == 0)
        r.fail("tree without nodes");

    tree.nodes.resize(n);
    // Rebuild child links from the pre-order listing with an explicit stack of
    // split nodes still waiting for a child.
    std::vector<std::pair<std::uint32_t, int>> open; // (node, children seen)
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = r.tokens();
        auto& node = tree.nodes[i];
        const auto self = static_cast<std::uint32_t>(i);
        if (i > 0) {
            if (open.empty())
                r.fail("node outside the tree");
            auto& [parent, seen] = open.back();
            (seen == 0 ? tree.nodes[parent].child0 : tree.nodes[parent].child1) = self;
            if (++seen == 2)
                open.pop_back();
        }
        if (t.size() == 3 && t[0] == "L") {
            node.counts = {r.number<std::uint64_t>(t[1]), r.number<std::uint64_t>(t[2])};
        }
        else if (t.size() == 4 && t[0] == "S") {
            node.feature = r.number<std::uint32_t>(t[1]);
            if (node.feature >= features)
                r.fail("split feature " + t[1] + " out of range");
            node.counts = {r.number<std::uint64_t>(t[2]), r.number<std::uint64_t>(t[3])};
            open.emplace_back(self, 0);
        }
        else {
            r.fail("expected 'L benign malware' or 'S feature benign malware'");
        }
    }
    if (!open.empty())
        r.fail("tree ends with incomplete split nodes");
    return tree;
}

} // namespace

void save_model(const Model& model, const FeatureCatalog& catalog, std::ostream& out)
{
    const auto f = num_features(model);
    if (f != catalog.size())
        throw Error("model has " + std::to_string(f) + " features, catalog " + std::to_string(catalog.size()));

    out << "droidtriage-model v1 " << to_string(kind_of(model)) << '\n';
    out << "fingerprint " << fingerprint_hex(catalog.fingerprint()) << '\n';
    out << "features " << f << '\n';

    if (const auto* nb = std::get_if<NbModel>(&model)) {
        out << "nb alpha=" << format_exact(nb->alpha) << " prior=" << format_exact(nb->prior_malware) << '\n';
        for (Eigen::Index j = 0; j < nb->theta_benign.size(); ++j)
            out << "theta " << format_exact(nb->theta_benign(j)) << ' ' << format_exact(nb->theta_malware(j))
                << '\n';
    }
    else if (const auto* tree = std::get_if<TreeModel>(&model)) {
        write_tree(*tree, out);
    }
    else if (const auto* forest = std::get_if<ForestModel>(&model)) {
        const auto& p = forest->params;
        out << "forest trees=" << forest->trees.size() << " k=" << p.k << " bootstrap=" << (p.bootstrap ? 1 : 0)
            << " fraction=" << format_exact(p.bootstrap_fraction) << " seed=" << p.seed << '\n';
        for (const auto& t : forest->trees)
            write_tree(t, out);
    }
    else if (const auto* logit = std::get_if<LogitModel>(&model)) {
        out << "logit intercept=" << format_exact(logit->intercept) << " max_iterations=" << logit->max_iterations
            << " cv_folds=" << logit->cv_folds << " regressors=" << logit->regressors.size() << '\n';
        for (const auto& r : logit->regressors)
            out << "R " << r.feature << ' ' << format_exact(r.value0) << ' ' << format_exact(r.value1) << '\n';
    }
    out << "end\n";
}

void save_model(const Model& model, const FeatureCatalog& catalog, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write model '" + path.string() + "'");
    save_model(model, catalog, out);
    if (!out)
        throw Error("I/O error writing '" + path.string() + "'");
}

LoadedModel load_model(std::istream& in, const std::string& source)
{
    Reader r(in, source);
    const auto head = r.tokens();
    if (head.size() != 3 || head[0] != "droidtriage-model" || head[1] != "v1")
        r.fail("not a droidtriage v1 model file");
    const auto kind = [&] {
        try {
            return parse_algo_kind(head[2]);
        }
        catch (const std::invalid_argument&) {
            r.fail("unknown model kind '" + head[2] + "'");
        }
    }();

    LoadedModel loaded;
    auto t = r.tokens();
    if (t.size() != 2 || t[0] != "fingerprint" || t[1].size() != 16)
        r.fail("expected 'fingerprint <16 hex digits>'");
    loaded.fingerprint = 0;
    for (char c : t[1]) {
        const int digit = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
        if (digit < 0)
            r.fail("invalid fingerprint '" + t[1] + "'");
        loaded.fingerprint = (loaded.fingerprint << 4) | static_cast<std::uint64_t>(digit);
    }
    t = r.tokens();
    if (t.size() != 2 || t[0] != "features")
        r.fail("expected 'features <count>'");
    const auto f = r.number<std::size_t>(t[1]);
    loaded.num_features = f;

    switch (kind) {
    case AlgoKind::NaiveBayes: {
        const auto kv = r.record("nb");
        NbModel nb;
        nb.alpha = r.field<double>(kv, "alpha");
        nb.prior_malware = r.field<double>(kv, "prior");
        nb.theta_benign.resize(static_cast<Eigen::Index>(f));
        nb.theta_malware.resize(static_cast<Eigen::Index>(f));
        for (std::size_t j = 0; j < f; ++j) {
            const auto row = r.tokens();
            if (row.size() != 3 || row[0] != "theta")
                r.fail("expected 'theta <benign> <malware>'");
            nb.theta_benign(static_cast<Eigen::Index>(j)) = r.number<double>(row[1]);
            nb.theta_malware(static_cast<Eigen::Index>(j)) = r.number<double>(row[2]);
        }
        loaded.model = std::move(nb);
        break;
    }
    case AlgoKind::DecisionTree:
    case AlgoKind::RandomTree:
        loaded.model = read_tree(r, f);
        break;
    case AlgoKind::RandomForest: {
        const auto kv = r.record("forest");
        ForestModel forest;
        const auto trees = r.field<std::size_t>(kv, "trees");
        forest.params.trees = trees;
        forest.params.k = r.field<std::size_t>(kv, "k");
        forest.params.bootstrap = r.field<int>(kv, "bootstrap") != 0;
        forest.params.bootstrap_fraction = r.field<double>(kv, "fraction");
        forest.params.seed = r.field<std::uint64_t>(kv, "seed");
        if (trees == 0)
            r.fail("forest without trees");
        for (std::size_t i = 0; i < trees; ++i)
            forest.trees.push_back(read_tree(r, f));
        loaded.model = std::move(forest);
        break;
    }
    case AlgoKind::SimpleLogistic: {
        const auto kv = r.record("logit");
        LogitModel logit;
        logit.num_features = f;
        logit.intercept = r.field<double>(kv, "intercept");
        logit.max_iterations = r.field<std::size_t>(kv, "max_iterations");
        logit.cv_folds = r.field<std::size_t>(kv, "cv_folds");
        const auto n = r.field<std::size_t>(kv, "regressors");
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = r.tokens();
            if (row.size() != 4 || row[0] != "R")
                r.fail("expected 'R <feature> <value0> <value1>'");
            SimpleRegressor reg{r.number<std::uint32_t>(row[1]), r.number<double>(row[2]), r.number<double>(row[3])};
            if (reg.feature >= f)
                r.fail("regressor feature " + row[1] + " out of range");
            logit.regressors.push_back(reg);
        }
        loaded.model = std::move(logit);
        break;
    }
    }
    const auto tail = r.tokens();
    if (tail.size() != 1 || tail[0] != "end")
        r.fail("expected 'end'");
    if (kind_of(loaded.model) != kind)
        r.fail("model body does not match kind '" + head[2] + "'");
    return loaded;
}

LoadedModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open model '" + path.string() + "'");
    return load_model(in, path.string());
}

void check_fingerprint(const LoadedModel& loaded, const FeatureCatalog& catalog)
{
    if (loaded.fingerprint != catalog.fingerprint() || loaded.num_features != catalog.size())
        throw Error("catalog fingerprint mismatch: model " + fingerprint_hex(loaded.fingerprint) + " (" +
                    std::to_string(loaded.num_features) + " features), data " +
                    fingerprint_hex(catalog.fingerprint()) + " (" + std::to_string(catalog.size()) + " features)");
}

} // namespace droidtriage
