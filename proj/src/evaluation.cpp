#include "aerofit/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "aerofit/error.hpp"

namespace aerofit {

std::vector<ScoredAttempt> score_attempts(const TemplateStore& store,
                                          std::span<const LabeledAttempt> attempts) {
    std::vector<ScoredAttempt> out;
    out.reserve(attempts.size());
    for (const auto& a : attempts) {
        if (a.mask.empty()) {
            out.push_back(ScoredAttempt{SimilarityScore(0.0), {}, a.target_template_id, a.label});
            continue;
        }
        MatchResult m = nearest_template(a.mask, store.refs());
        out.push_back(ScoredAttempt{m.alpha, std::move(m.template_id), a.target_template_id, a.label});
    }
    return out;
}

ConfusionCounts confusion_counts(std::span<const ScoredAttempt> attempts, double threshold) {
    if (attempts.empty()) throw Error(ErrorCode::EmptyDataset, "no attempts to evaluate");
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    ConfusionCounts c;
    for (const auto& a : attempts) {
        const bool positive =
            a.alpha.value() >= threshold && a.matched_template_id == a.target_template_id;
        if (a.label == Label::correct) {
            ++(positive ? c.tp : c.fn);
        } else {
            ++(positive ? c.fp : c.tn);
        }
    }
    return c;
}

double sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) throw Error(ErrorCode::UndefinedMetric, "sensitivity with tp + fn = 0");
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double false_positive_rate(const ConfusionCounts& c) {
    if (c.tn + c.fp == 0) {
        throw Error(ErrorCode::UndefinedMetric, "false positive rate with tn + fp = 0");
    }
    return static_cast<double>(c.fp) / static_cast<double>(c.tn + c.fp);
}

double accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) throw Error(ErrorCode::UndefinedMetric, "accuracy over zero attempts");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

std::vector<double> threshold_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(start >= 0.0) || !(stop <= 1.0) || !(start <= stop)) {
        throw Error(ErrorCode::InvalidArgument,
                    "sweep needs 0 <= start <= stop <= 1 and step > 0");
    }
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) {
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return out;
}

std::vector<double> parse_sweep(std::string_view text) {
    double v[3] = {0, 0, 0};
    std::size_t begin = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(':', begin) : text.size();
        if (end == std::string_view::npos) {
            throw Error(ErrorCode::Parse, "sweep must be start:stop:step, got '" + std::string(text) + "'");
        }
        const std::string part(text.substr(begin, end - begin));
        try {
            std::size_t used = 0;
            v[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "bad sweep component '" + part + "'");
        }
        begin = end + 1;
    }
    return threshold_grid(v[0], v[1], v[2]);
}

std::vector<double> default_thresholds() { return threshold_grid(0.0, 1.0, 0.1); }

namespace {

void check_thresholds(std::span<const double> thresholds) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "threshold outside [0, 1]");
        }
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "thresholds must be strictly increasing");
        }
    }
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const ScoredAttempt> attempts,
                                std::span<const double> thresholds) {
    if (attempts.empty()) throw Error(ErrorCode::EmptyDataset, "no attempts to evaluate");
    check_thresholds(thresholds);
    std::vector<RocPoint> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        const ConfusionCounts c = confusion_counts(attempts, t);
        out.push_back(RocPoint{t, sensitivity(c), false_positive_rate(c)});
    }
    return out;
}

double optimal_threshold(std::span<const RocPoint> curve) {
    if (curve.empty()) throw Error(ErrorCode::EmptyCurve, "ROC curve has no points");
    // J values that differ only by rounding noise are ties.
    constexpr double kTie = 1e-12;
    const RocPoint* best = &curve.front();
    for (const auto& p : curve) {
        const double j = p.sensitivity - p.false_positive_rate;
        const double best_j = best->sensitivity - best->false_positive_rate;
        if (j > best_j + kTie || (std::abs(j - best_j) <= kTie && p.threshold > best->threshold)) {
            best = &p;
        }
    }
    return best->threshold;
}

std::vector<EvaluationRow> evaluate(std::span<const ScoredAttempt> attempts,
                                    std::span<const double> thresholds) {
    if (attempts.empty()) throw Error(ErrorCode::EmptyDataset, "no attempts to evaluate");
    check_thresholds(thresholds);
    std::vector<EvaluationRow> rows;
    for (double t : thresholds) {
        const ConfusionCounts c = confusion_counts(attempts, t);
        rows.push_back(EvaluationRow{t, c, sensitivity(c), false_positive_rate(c), accuracy(c)});
    }
    return rows;
}

namespace {

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const EvaluationRow> rows) {
    out << "threshold,tp,fp,tn,fn,sensitivity,fpr,accuracy\n";
    for (const auto& r : rows) {
        out << fixed6(r.threshold) << ',' << r.counts.tp << ',' << r.counts.fp << ','
            << r.counts.tn << ',' << r.counts.fn << ',' << fixed6(r.sensitivity) << ','
            << fixed6(r.false_positive_rate) << ',' << fixed6(r.accuracy) << '\n';
    }
}

void write_summary(std::ostream& out, std::span<const EvaluationRow> rows, double optimal) {
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %6s %6s %6s %6s %11s %9s %9s\n", "threshold", "tp",
                  "fp", "tn", "fn", "sensitivity", "fpr", "accuracy");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-9.2f %6zu %6zu %6zu %6zu %11.6f %9.6f %9.6f\n",
                      r.threshold, r.counts.tp, r.counts.fp, r.counts.tn, r.counts.fn,
                      r.sensitivity, r.false_positive_rate, r.accuracy);
        out << line;
    }
    out << "optimal_threshold " << fixed6(optimal) << '\n';
}

void write_scored(std::ostream& out, std::span<const ScoredAttempt> attempts) {
    for (const auto& a : attempts) {
        char alpha[32];
        std::snprintf(alpha, sizeof alpha, "%.17g", a.alpha.value());
        out << alpha << '\t' << (a.matched_template_id.empty() ? "-" : a.matched_template_id)
            << '\t' << a.target_template_id << '\t' << to_string(a.label) << '\n';
    }
}

std::vector<ScoredAttempt> read_scored(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open scored file " + path.string());
    std::vector<ScoredAttempt> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string s; std::getline(ss, s, '\t');) f.push_back(s);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (f.size() != 4) {
            throw Error(ErrorCode::Parse, where + ": expected alpha<TAB>matched<TAB>target<TAB>label");
        }
        try {
            std::size_t used = 0;
            const double alpha = std::stod(f[0], &used);
            if (used != f[0].size()) throw std::invalid_argument(f[0]);
            out.push_back(ScoredAttempt{SimilarityScore(alpha), f[1] == "-" ? std::string{} : f[1],
                                        f[2], parse_label(f[3])});
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, where + ": " + e.detail());
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, where + ": bad alpha '" + f[0] + "'");
        }
    }
    return out;
}

}  // namespace aerofit
