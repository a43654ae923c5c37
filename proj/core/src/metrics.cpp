#include "hyperact/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hyperact/errors.hpp"

namespace hyperact {

std::vector<ConfusionCounts> confusion(const Matrix& probs, const TargetMatrix& targets,
                                       double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw ConfigError("confusion: threshold must lie in (0, 1)");
    }
    if (probs.rows() != targets.rows || probs.cols() != targets.cols) {
        throw ShapeError("confusion: probs " + probs.shape_str() + " vs targets " +
                         std::to_string(targets.rows) + "x" + std::to_string(targets.cols));
    }
    std::vector<ConfusionCounts> out(probs.cols());
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        for (std::size_t c = 0; c < probs.cols(); ++c) {
            TriState t = targets(i, c);
            if (t == TriState::Missing) continue;
            bool predicted = probs(i, c) >= threshold;
            bool actual = t == TriState::Positive;
            if (predicted && actual)
                ++out[c].tp;
            else if (!predicted && !actual)
                ++out[c].tn;
            else if (predicted && !actual)
                ++out[c].fp;
            else
                ++out[c].fn;
        }
    }
    return out;
}

double mcc(const ConfusionCounts& c) {
    double tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
    double fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
    double f1 = tp + fp, f2 = tp + fn, f3 = tn + fp, f4 = tn + fn;
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(f1 * f2 * f3 * f4);
}

namespace {

double class_f1(double tp, double fp, double fn) {
    double denom = 2.0 * tp + fp + fn;
    if (denom == 0.0) return 0.0;
    return 2.0 * tp / denom;
}

}  // namespace

double macro_f1(const ConfusionCounts& c) {
    double positive = class_f1(static_cast<double>(c.tp), static_cast<double>(c.fp),
                               static_cast<double>(c.fn));
    // The negative class mirrors the counts: TN plays TP, FN plays FP.
    double negative = class_f1(static_cast<double>(c.tn), static_cast<double>(c.fn),
                               static_cast<double>(c.fp));
    return 0.5 * (positive + negative);
}

MetricsReport aggregate_report(const std::vector<ConfusionCounts>& per_label,
                               const LabelSpace& space) {
    if (per_label.size() != space.num_labels()) {
        throw ShapeError("aggregate_report: " + std::to_string(per_label.size()) +
                         " labels vs label space H=" + std::to_string(space.num_labels()));
    }
    MetricsReport report;
    for (std::size_t c = 0; c < per_label.size(); ++c) {
        LabelMetrics lm;
        bool is_context = c < space.num_contexts();
        lm.name = is_context ? space.context_names[c]
                             : space.activity_names[c - space.num_contexts()];
        lm.category = is_context ? "context" : "activity";
        lm.counts = per_label[c];
        lm.mcc = mcc(per_label[c]);
        lm.macro_f1 = macro_f1(per_label[c]);
        report.labels.push_back(std::move(lm));
    }

    auto mean_over = [&](const std::string& category, double LabelMetrics::*field) {
        double acc = 0.0;
        std::size_t n = 0;
        for (const auto& lm : report.labels) {
            if (!category.empty() && lm.category != category) continue;
            acc += lm.*field;
            ++n;
        }
        return n == 0 ? 0.0 : acc / static_cast<double>(n);
    };
    report.context_mcc = mean_over("context", &LabelMetrics::mcc);
    report.context_f1 = mean_over("context", &LabelMetrics::macro_f1);
    report.activity_mcc = mean_over("activity", &LabelMetrics::mcc);
    report.activity_f1 = mean_over("activity", &LabelMetrics::macro_f1);
    report.overall_mcc = mean_over("", &LabelMetrics::mcc);
    report.overall_f1 = mean_over("", &LabelMetrics::macro_f1);
    return report;
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
    out << "label,category,tp,tn,fp,fn,mcc,macro_f1\n";
    char buf[64];
    auto metric = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        out << buf;
    };
    for (const auto& lm : report.labels) {
        out << lm.name << "," << lm.category << "," << lm.counts.tp << "," << lm.counts.tn
            << "," << lm.counts.fp << "," << lm.counts.fn << ",";
        metric(lm.mcc);
        out << ",";
        metric(lm.macro_f1);
        out << "\n";
    }
    auto avg_row = [&](const char* name, double m, double f) {
        out << name << ",average,,,,,";
        metric(m);
        out << ",";
        metric(f);
        out << "\n";
    };
    avg_row("Context Avg", report.context_mcc, report.context_f1);
    avg_row("Activity Avg", report.activity_mcc, report.activity_f1);
    avg_row("Overall Avg", report.overall_mcc, report.overall_f1);
}

}  // namespace hyperact
