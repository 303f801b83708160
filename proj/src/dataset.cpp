#include "droidtriage/dataset.hpp"

#include "droidtriage/error.hpp"
#include "droidtriage/rng.hpp"
#include "text.hpp"

#include <algorithm>
#include <fstream>
#include <string>

namespace droidtriage {

std::string_view to_string(Label label)
{
    return label == Label::Malware ? "malware" : "benign";
}

Dataset::Dataset(FeatureCatalog catalog_, BitMatrix features_, std::vector<Label> labels_)
    : catalog(std::move(catalog_)), features(std::move(features_)), labels(std::move(labels_))
{
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw Error("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
    if (static_cast<std::size_t>(features.cols()) != catalog.size())
        throw Error("dataset has " + std::to_string(features.cols()) + " columns but the catalog defines " +
                    std::to_string(catalog.size()) + " features");
    if (features.size() > 0 && features.maxCoeff() > 1)
        throw Error("dataset contains a value other than 0 or 1");
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const Label> labels)
{
    const auto malware = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Malware));
    return {labels.size() - malware, malware};
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows)
{
    BitMatrix features(static_cast<Eigen::Index>(rows.size()), data.features.cols());
    std::vector<Label> labels;
    labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        features.row(static_cast<Eigen::Index>(i)) = data.row(rows[i]);
        labels.push_back(data.labels[rows[i]]);
    }
    return Dataset(data.catalog, std::move(features), std::move(labels));
}

Dataset project(const Dataset& data, const std::vector<std::size_t>& columns)
{
    BitMatrix features(data.features.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        features.col(static_cast<Eigen::Index>(j)) = data.features.col(static_cast<Eigen::Index>(columns[j]));
    return Dataset(select_features(data.catalog, columns), std::move(features), data.labels);
}

Dataset project(const Dataset& data, FeatureSet set)
{
    if (set == FeatureSet::CAPF)
        return data;
    return project(data, feature_set_indices(data.catalog, set));
}

Dataset project(const Dataset& data, const std::vector<std::string>& names)
{
    std::vector<std::size_t> columns;
    columns.reserve(names.size());
    for (const auto& name : names) {
        auto idx = data.catalog.find(name);
        if (!idx)
            throw Error("feature '" + name + "' is not in the dataset catalog");
        columns.push_back(*idx);
    }
    return project(data, columns);
}

namespace {

struct Header {
    std::optional<std::size_t> class_column;
};

Header check_header(std::string_view line, const FeatureCatalog& catalog, const std::string& source,
                    bool label_required)
{
    const auto cells = text::split(line);
    Header header;
    std::size_t features = cells.size();
    if (!cells.empty() && cells.back() == "class") {
        header.class_column = cells.size() - 1;
        --features;
    }
    else if (std::find(cells.begin(), cells.end(), "class") != cells.end()) {
        throw ParseError(source, 1, "'class' must be the last column");
    }
    else if (label_required) {
        throw ParseError(source, 1, "label column absent");
    }

    if (features != catalog.size())
        throw ParseError(source, 1,
                         "header has " + std::to_string(features) + " feature columns, catalog has " +
                             std::to_string(catalog.size()));
    for (std::size_t j = 0; j < features; ++j) {
        if (cells[j] != catalog[j].name)
            throw ParseError(source, 1,
                             "column " + std::to_string(j + 1) + " is '" + std::string(cells[j]) +
                                 "', catalog expects '" + catalog[j].name + "'");
    }
    return header;
}

struct ParsedRows {
    std::vector<std::uint8_t> bits;
    std::vector<Label> labels;
    std::size_t rows = 0;
};

ParsedRows parse_rows(std::istream& in, const FeatureCatalog& catalog, const Header& header,
                      const std::string& source)
{
    const std::size_t width = catalog.size() + (header.class_column ? 1 : 0);
    ParsedRows parsed;
    std::string raw;
    std::size_t line_no = 1;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::chomp(raw);
        if (line.empty())
            continue;
        ++parsed.rows;
        const auto cells = text::split(line);
        const std::string where = "row " + std::to_string(parsed.rows);
        if (cells.size() != width)
            throw ParseError(source, line_no,
                             where + ": expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(cells.size()));
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            if (cells[j] == "0")
                parsed.bits.push_back(0);
            else if (cells[j] == "1")
                parsed.bits.push_back(1);
            else
                throw ParseError(source, line_no,
                                 where + ", column " + std::to_string(j + 1) + " ('" + catalog[j].name +
                                     "'): value '" + std::string(cells[j]) + "' is not 0 or 1");
        }
        if (header.class_column) {
            const auto cell = cells[*header.class_column];
            if (cell == "benign")
                parsed.labels.push_back(Label::Benign);
            else if (cell == "malware")
                parsed.labels.push_back(Label::Malware);
            else
                throw ParseError(source, line_no,
                                 where + ", column " + std::to_string(width) + " ('class'): unknown label '" +
                                     std::string(cell) + "'");
        }
    }
    return parsed;
}

BitMatrix to_matrix(const ParsedRows& parsed, std::size_t cols)
{
    BitMatrix m(static_cast<Eigen::Index>(parsed.rows), static_cast<Eigen::Index>(cols));
    if (m.size() > 0)
        std::copy(parsed.bits.begin(), parsed.bits.end(), m.data());
    return m;
}

std::string read_header(std::istream& in, const std::string& source)
{
    std::string raw;
    if (!std::getline(in, raw))
        throw ParseError(source, 1, "missing header");
    return std::string(text::chomp(raw));
}

} // namespace

Dataset read_csv(std::istream& in, const FeatureCatalog& catalog, const std::string& source)
{
    const auto header = check_header(read_header(in, source), catalog, source, true);
    auto parsed = parse_rows(in, catalog, header, source);
    return Dataset(catalog, to_matrix(parsed, catalog.size()), std::move(parsed.labels));
}

Dataset read_csv(const std::filesystem::path& path, const FeatureCatalog& catalog)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open dataset '" + path.string() + "'");
    return read_csv(in, catalog, path.string());
}

UnlabeledRows read_feature_csv(const std::filesystem::path& path, const FeatureCatalog& catalog)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open dataset '" + path.string() + "'");
    const auto source = path.string();
    const auto header = check_header(read_header(in, source), catalog, source, false);
    auto parsed = parse_rows(in, catalog, header, source);
    UnlabeledRows out{to_matrix(parsed, catalog.size()), std::nullopt};
    if (header.class_column)
        out.labels = std::move(parsed.labels);
    return out;
}

void write_csv(const Dataset& data, std::ostream& out)
{
    for (const auto& f : data.catalog)
        out << f.name << ',';
    out << "class\n";
    std::string line;
    for (std::size_t i = 0; i < data.size(); ++i) {
        line.clear();
        const auto row = data.row(i);
        for (Eigen::Index j = 0; j < row.size(); ++j) {
            line += row(j) ? '1' : '0';
            line += ',';
        }
        line += to_string(data.labels[i]);
        line += '\n';
        out << line;
    }
}

void write_csv(const Dataset& data, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write dataset '" + path.string() + "'");
    write_csv(data, out);
    if (!out)
        throw Error("I/O error writing '" + path.string() + "'");
}

SyntheticSpec SyntheticSpec::uniform(std::size_t num_features, double rate, std::size_t n_benign,
                                     std::size_t n_malware)
{
    SyntheticSpec spec;
    spec.p_benign = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(num_features), rate);
    spec.p_malware = spec.p_benign;
    spec.n_benign = n_benign;
    spec.n_malware = n_malware;
    return spec;
}

void SyntheticSpec::validate(std::size_t num_features) const
{
    const auto n = static_cast<Eigen::Index>(num_features);
    if (p_benign.size() != n || p_malware.size() != n)
        throw Error("synthetic spec defines " + std::to_string(p_benign.size()) + "/" +
                    std::to_string(p_malware.size()) + " rates for " + std::to_string(num_features) +
                    " features");
    auto in_unit = [](const Eigen::ArrayXd& p) {
        return p.size() == 0 || ((p >= 0.0) && (p <= 1.0)).all();
    };
    if (!in_unit(p_benign) || !in_unit(p_malware))
        throw Error("synthetic spec rates must lie in [0, 1]");
    if (xor_interaction) {
        const auto& x = *xor_interaction;
        if (x.first == x.second)
            throw Error("xor interaction needs two distinct features");
        if (x.first >= num_features || x.second >= num_features)
            throw Error("xor interaction feature index out of range");
        if (!(x.strength >= 0.5 && x.strength <= 1.0))
            throw Error("xor interaction strength must lie in [0.5, 1]");
    }
}

SyntheticSpec parse_synthetic_spec(std::istream& in, const FeatureCatalog& catalog, const std::string& source)
{
    std::optional<std::size_t> n_benign, n_malware;
    double background = kDefaultBackgroundRate;
    struct Row {
        std::size_t line;
        std::size_t feature;
        double pb, pm;
    };
    std::vector<Row> rows;
    std::optional<std::pair<std::size_t, std::string>> xor_text;
    bool header_seen = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::chomp(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError(source, line_no, "directive without '='");
            const auto key = line.substr(1, eq - 1);
            const auto value = line.substr(eq + 1);
            if (key == "n_benign" || key == "n_malware") {
                auto n = text::parse_number<std::size_t>(value);
                if (!n)
                    throw ParseError(source, line_no, "invalid count '" + std::string(value) + "'");
                (key == "n_benign" ? n_benign : n_malware) = *n;
            }
            else if (key == "background") {
                auto p = text::parse_number<double>(value);
                if (!p || *p < 0.0 || *p > 1.0)
                    throw ParseError(source, line_no, "invalid background rate '" + std::string(value) + "'");
                background = *p;
            }
            else if (key == "xor") {
                xor_text = std::make_pair(line_no, std::string(value));
            }
            else {
                throw ParseError(source, line_no, "unknown directive '" + std::string(key) + "'");
            }
            continue;
        }
        if (!header_seen) {
            if (line != "name,p_benign,p_malware")
                throw ParseError(source, line_no, "expected header 'name,p_benign,p_malware'");
            header_seen = true;
            continue;
        }
        const auto cells = text::split(line);
        if (cells.size() != 3)
            throw ParseError(source, line_no, "expected 3 fields, found " + std::to_string(cells.size()));
        auto idx = catalog.find(cells[0]);
        if (!idx)
            throw ParseError(source, line_no, "feature '" + std::string(cells[0]) + "' is not in the catalog");
        auto pb = text::parse_number<double>(cells[1]);
        auto pm = text::parse_number<double>(cells[2]);
        if (!pb || !pm || *pb < 0.0 || *pb > 1.0 || *pm < 0.0 || *pm > 1.0)
            throw ParseError(source, line_no, "rates must be numbers in [0, 1]");
        rows.push_back({line_no, *idx, *pb, *pm});
    }
    if (!n_benign || !n_malware)
        throw ParseError(source, line_no, "missing #n_benign or #n_malware directive");

    auto spec = SyntheticSpec::uniform(catalog.size(), background, *n_benign, *n_malware);
    for (const auto& r : rows) {
        spec.p_benign(static_cast<Eigen::Index>(r.feature)) = r.pb;
        spec.p_malware(static_cast<Eigen::Index>(r.feature)) = r.pm;
    }
    if (xor_text) {
        const auto cells = text::split(xor_text->second);
        if (cells.size() != 3)
            throw ParseError(source, xor_text->first, "#xor expects nameA,nameB,q");
        auto a = catalog.find(cells[0]);
        auto b = catalog.find(cells[1]);
        auto q = text::parse_number<double>(cells[2]);
        if (!a || !b)
            throw ParseError(source, xor_text->first, "#xor names a feature not in the catalog");
        if (!q)
            throw ParseError(source, xor_text->first, "#xor strength is not a number");
        spec.xor_interaction = XorInteraction{*a, *b, *q};
    }
    try {
        spec.validate(catalog.size());
    }
    catch (const Error& e) {
        throw ParseError(source, line_no, e.what());
    }
    return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path, const FeatureCatalog& catalog)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open synthetic spec '" + path.string() + "'");
    return parse_synthetic_spec(in, catalog, path.string());
}

Dataset synthesize(const SyntheticSpec& spec, const FeatureCatalog& catalog, std::uint64_t seed)
{
    spec.validate(catalog.size());
    const auto n = spec.n_benign + spec.n_malware;
    const auto cols = static_cast<Eigen::Index>(catalog.size());
    BitMatrix features(static_cast<Eigen::Index>(n), cols);
    std::vector<Label> labels(n, Label::Benign);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(spec.n_benign), labels.end(), Label::Malware);

    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const bool malware = labels[i] == Label::Malware;
        const auto& p = malware ? spec.p_malware : spec.p_benign;
        auto row = features.row(static_cast<Eigen::Index>(i));
        for (Eigen::Index j = 0; j < cols; ++j)
            row(j) = rng.bernoulli(p(j)) ? 1 : 0;
        if (spec.xor_interaction) {
            const auto& x = *spec.xor_interaction;
            const bool agree = rng.bernoulli(x.strength);
            const std::uint8_t target = (malware == agree) ? 1 : 0;
            const auto a = static_cast<Eigen::Index>(x.first);
            const auto b = static_cast<Eigen::Index>(x.second);
            row(b) = static_cast<std::uint8_t>(row(a) ^ target);
        }
    }
    return Dataset(catalog, std::move(features), std::move(labels));
}

} // namespace droidtriage
