#include "aerofit/similarity.hpp"

#include <cmath>

#include "aerofit/error.hpp"

namespace aerofit {

SimilarityScore::SimilarityScore(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "similarity score must lie in [0, 1], got " + std::to_string(alpha));
    }
}

SimilarityScore SimilarityScore::from_counts(std::size_t intersection, std::size_t union_count) {
    if (union_count == 0) {
        throw Error(ErrorCode::EmptyUnion, "both masks have zero foreground pixels");
    }
    if (intersection > union_count) {
        throw Error(ErrorCode::InvalidArgument, "intersection larger than union");
    }
    return SimilarityScore(static_cast<double>(intersection) / static_cast<double>(union_count));
}

int SimilarityScore::display() const noexcept {
    return static_cast<int>(std::lround(alpha_ * 100.0));
}

OverlapCounts overlap(const BinaryMask& beta, const BinaryMask& epsilon) {
    if (!beta.same_shape(epsilon)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "mask " + std::to_string(beta.width()) + "x" + std::to_string(beta.height()) +
                        " vs " + std::to_string(epsilon.width()) + "x" +
                        std::to_string(epsilon.height()));
    }
    const auto a = beta.data();
    const auto b = epsilon.data();
    OverlapCounts c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.intersection += a[i] & b[i];
        c.union_count += a[i] | b[i];
    }
    return c;
}

SimilarityScore jaccard(const BinaryMask& beta, const BinaryMask& epsilon) {
    const OverlapCounts c = overlap(beta, epsilon);
    return SimilarityScore::from_counts(c.intersection, c.union_count);
}

MatchResult nearest_template(const BinaryMask& beta, std::span<const TemplateRef> templates) {
    if (templates.empty()) {
        throw Error(ErrorCode::EmptyTemplateSet, "no templates to match against");
    }
    if (beta.empty()) {
        throw Error(ErrorCode::EmptyMask, "query mask has no foreground pixels");
    }
    MatchResult best;
    bool have = false;
    for (std::size_t i = 0; i < templates.size(); ++i) {
        const SimilarityScore s = jaccard(beta, *templates[i].mask);
        // Strict comparison keeps the earliest of tied maxima.
        if (!have || s > best.alpha) {
            best = MatchResult{templates[i].id, i, s};
            have = true;
        }
    }
    return best;
}

Classification classify(const BinaryMask& beta, std::span<const TemplateRef> templates,
                        double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    MatchResult m = nearest_template(beta, templates);
    const bool ok = m.alpha.value() >= threshold;
    return Classification{ok, std::move(m)};
}

}  // namespace aerofit
