#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "aerofit/mask.hpp"

namespace aerofit {

/// Intersected-over-union ratio of two foreground regions, always in [0, 1].
class SimilarityScore {
public:
    constexpr SimilarityScore() = default;
    /// Throws InvalidArgument outside [0, 1].
    explicit SimilarityScore(double alpha);

    static SimilarityScore from_counts(std::size_t intersection, std::size_t union_count);

    constexpr double value() const noexcept { return alpha_; }
    /// Fig-3 style score over 100, rounded to the nearest integer.
    int display() const noexcept;

    friend constexpr auto operator<=>(const SimilarityScore&, const SimilarityScore&) = default;

private:
    double alpha_ = 0.0;
};

struct OverlapCounts {
    std::size_t intersection = 0;
    std::size_t union_count = 0;
};

/// Pixel counts of |beta ∩ epsilon| and |beta ∪ epsilon|. Throws DimensionMismatch.
OverlapCounts overlap(const BinaryMask& beta, const BinaryMask& epsilon);

/// |beta ∩ epsilon| / |beta ∪ epsilon|. Throws DimensionMismatch, or EmptyUnion
/// when both masks are empty.
SimilarityScore jaccard(const BinaryMask& beta, const BinaryMask& epsilon);

/// Anything the nearest-neighbour search can rank: an id plus its mask.
struct TemplateRef {
    std::string id;
    const BinaryMask* mask = nullptr;
};

struct MatchResult {
    std::string template_id;
    std::size_t position = 0;  // index into the searched collection
    SimilarityScore alpha;
};

/// Template with the highest jaccard score; the earliest one wins ties.
/// Throws EmptyTemplateSet, DimensionMismatch, or EmptyMask for an empty query.
MatchResult nearest_template(const BinaryMask& beta, std::span<const TemplateRef> templates);

struct Classification {
    bool accepted = false;
    MatchResult match;
};

/// Accepted iff the best score reaches the threshold (inclusive).
Classification classify(const BinaryMask& beta, std::span<const TemplateRef> templates,
                        double threshold);

}  // namespace aerofit
