#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aerofit/similarity.hpp"
#include "aerofit/synthetic.hpp"
#include "aerofit/template_store.hpp"

namespace aerofit {

struct ScoredAttempt {
    SimilarityScore alpha;
    std::string matched_template_id;  // empty when the attempt had no foreground
    std::string target_template_id;
    Label label = Label::correct;
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct RocPoint {
    double threshold = 0.0;
    double sensitivity = 0.0;
    double false_positive_rate = 0.0;
};

/// Nearest-neighbour match of every attempt over the whole store. Attempts
/// with an empty mask score 0 with no matched template.
std::vector<ScoredAttempt> score_attempts(const TemplateStore& store,
                                          std::span<const LabeledAttempt> attempts);

/// Predicted positive iff alpha >= threshold and the best match is the target.
ConfusionCounts confusion_counts(std::span<const ScoredAttempt> attempts, double threshold);

double sensitivity(const ConfusionCounts& c);          // tp / (tp + fn)
double false_positive_rate(const ConfusionCounts& c);  // fp / (tn + fp)
double accuracy(const ConfusionCounts& c);             // (tp + tn) / total

/// Inclusive grid start, start+step, ..., stop. Grid values are snapped to
/// 1e-9 so 0.3 comes out as the literal 0.3 rather than 0.30000000000000004.
std::vector<double> threshold_grid(double start, double stop, double step);
/// Parses "start:stop:step".
std::vector<double> parse_sweep(std::string_view text);
/// 0.0, 0.1, ..., 1.0.
std::vector<double> default_thresholds();

std::vector<RocPoint> roc_curve(std::span<const ScoredAttempt> attempts,
                                std::span<const double> thresholds);
inline std::vector<RocPoint> roc_curve(std::span<const ScoredAttempt> attempts) {
    const auto t = default_thresholds();
    return roc_curve(attempts, t);
}

/// Threshold maximising Youden's J (sensitivity - FPR); ties (within 1e-12)
/// go to the larger threshold.
double optimal_threshold(std::span<const RocPoint> curve);

struct EvaluationRow {
    double threshold = 0.0;
    ConfusionCounts counts;
    double sensitivity = 0.0;
    double false_positive_rate = 0.0;
    double accuracy = 0.0;
};

std::vector<EvaluationRow> evaluate(std::span<const ScoredAttempt> attempts,
                                    std::span<const double> thresholds);

/// CSV with header "threshold,tp,fp,tn,fn,sensitivity,fpr,accuracy"; ratios
/// written with 6 decimals.
void write_report_csv(std::ostream& out, std::span<const EvaluationRow> rows);
/// Fixed-width table followed by the optimal threshold line.
void write_summary(std::ostream& out, std::span<const EvaluationRow> rows, double optimal);

/// Pre-scored attempts, one per line: alpha<TAB>matched<TAB>target<TAB>label.
/// An empty matched field is written as "-".
void write_scored(std::ostream& out, std::span<const ScoredAttempt> attempts);
std::vector<ScoredAttempt> read_scored(const std::filesystem::path& path);

}  // namespace aerofit
