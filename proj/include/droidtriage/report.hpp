#pragma once

#include "droidtriage/crossval.hpp"
#include "droidtriage/metrics.hpp"
#include "droidtriage/prediction.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace droidtriage {

/// `algo,feature_set,features,TPR,TNR,FPR,FNR,ACC,ERR,precision,AUC`, three
/// decimals; undefined values print as `undefined`.
void write_report_csv(std::span<const ComparisonRow> rows, std::ostream& out);

/// `fpr,tpr,threshold`; the first point's threshold prints as `inf`.
void write_roc_csv(const RocCurve& curve, std::ostream& out);

/// Standalone SVG of the staircase with the AUC annotated.
std::string roc_svg(const RocCurve& curve, const std::string& title);

/// `row,label,score` with rows numbered from 1.
void write_predictions_csv(std::span<const Prediction> predictions, std::ostream& out);

} // namespace droidtriage
