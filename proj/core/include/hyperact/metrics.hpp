#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyperact/dataset.hpp"
#include "hyperact/matrix.hpp"

namespace hyperact {

/// Per-label confusion counts over non-missing targets only.
struct ConfusionCounts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::size_t total() const { return tp + tn + fp + fn; }
};

/// Binarizes p >= threshold (boundary counts as positive); missing targets
/// are skipped. One ConfusionCounts per label column.
std::vector<ConfusionCounts> confusion(const Matrix& probs, const TargetMatrix& targets,
                                       double threshold = 0.5);

/// Matthews correlation coefficient. Any zero factor in the denominator
/// makes the value 0 by convention.
double mcc(const ConfusionCounts& c);

/// Mean of the positive-class F1 and the negative-class F1 for one label;
/// an undefined per-class F1 (0/0) counts as 0.
double macro_f1(const ConfusionCounts& c);

struct LabelMetrics {
    std::string name;
    std::string category;  // "context" or "activity"
    ConfusionCounts counts;
    double mcc = 0.0;
    double macro_f1 = 0.0;
};

struct MetricsReport {
    std::vector<LabelMetrics> labels;  // contexts first, then activities
    double context_mcc = 0.0, context_f1 = 0.0;
    double activity_mcc = 0.0, activity_f1 = 0.0;
    double overall_mcc = 0.0, overall_f1 = 0.0;
};

/// Unweighted means within the context block, the activity block and overall.
MetricsReport aggregate_report(const std::vector<ConfusionCounts>& per_label,
                               const LabelSpace& space);

/// One row per label (name, category, TP, TN, FP, FN, MCC, MacF1) plus three
/// average rows; comma-separated, metric values with six decimal places.
void write_metrics_csv(std::ostream& out, const MetricsReport& report);

}  // namespace hyperact
