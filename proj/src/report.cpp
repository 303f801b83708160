#include "droidtriage/report.hpp"

#include "text.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace droidtriage {

namespace {

std::string cell(double value)
{
    return std::isnan(value) ? std::string("undefined") : text::format_fixed(value, 3);
}

std::string escape_xml(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_report_csv(std::span<const ComparisonRow> rows, std::ostream& out)
{
    out << "algo,feature_set,features,TPR,TNR,FPR,FNR,ACC,ERR,precision,AUC\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << r.algo << ',' << r.feature_set << ',' << r.features << ',' << cell(m.tpr) << ',' << cell(m.tnr)
            << ',' << cell(m.fpr) << ',' << cell(m.fnr) << ',' << cell(m.acc) << ',' << cell(m.err) << ','
            << (m.precision ? cell(*m.precision) : std::string("undefined")) << ',' << cell(r.auc) << '\n';
    }
}

void write_roc_csv(const RocCurve& curve, std::ostream& out)
{
    out << "fpr,tpr,threshold\n";
    for (const auto& p : curve.points) {
        out << text::format_exact(p.fpr) << ',' << text::format_exact(p.tpr) << ','
            << (std::isinf(p.threshold) ? std::string("inf") : text::format_exact(p.threshold)) << '\n';
    }
}

std::string roc_svg(const RocCurve& curve, const std::string& title)
{
    constexpr double size = 400, margin = 50;
    auto px = [&](double fpr) { return margin + fpr * size; };
    auto py = [&](double tpr) { return margin + (1.0 - tpr) * size; };
    auto fmt = [](double v) { return text::format_fixed(v, 2); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
        << size + 2 * margin << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
        << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    for (int i = 0; i <= 10; i += 2) {
        const double v = i / 10.0;
        svg << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(margin + size + 18) << "\" text-anchor=\"middle\">"
            << text::format_fixed(v, 1) << "</text>\n";
        svg << "<text x=\"" << fmt(margin - 8) << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\">"
            << text::format_fixed(v, 1) << "</text>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\" points=\"";
    for (const auto& p : curve.points)
        svg << fmt(px(p.fpr)) << ',' << fmt(py(p.tpr)) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << fmt(margin + size / 2) << "\" y=\"" << fmt(margin - 18)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
    svg << "<text x=\"" << fmt(margin + size / 2) << "\" y=\"" << fmt(margin + size + 38)
        << "\" text-anchor=\"middle\">False positive rate</text>\n";
    svg << "<text transform=\"rotate(-90)\" x=\"" << fmt(-(margin + size / 2)) << "\" y=\"" << fmt(margin - 32)
        << "\" text-anchor=\"middle\">True positive rate</text>\n";
    svg << "<text x=\"" << fmt(px(0.95)) << "\" y=\"" << fmt(py(0.05)) << "\" text-anchor=\"end\">AUC = "
        << text::format_fixed(curve.auc, 3) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_predictions_csv(std::span<const Prediction> predictions, std::ostream& out)
{
    out << "row,label,score\n";
    for (std::size_t i = 0; i < predictions.size(); ++i)
        out << (i + 1) << ',' << to_string(predictions[i].label) << ','
            << text::format_exact(predictions[i].score) << '\n';
}

} // namespace droidtriage
