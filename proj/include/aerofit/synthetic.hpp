#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerofit/mask.hpp"
#include "aerofit/template_store.hpp"

namespace aerofit {

enum class Label { correct, incorrect };

std::string_view to_string(Label label) noexcept;
/// Throws Parse for anything but "correct" / "incorrect".
Label parse_label(std::string_view text);

struct LabeledAttempt {
    std::string id;
    BinaryMask mask;
    std::string target_template_id;
    Label label = Label::correct;
};

/// Applied to every generated attempt: dilate, then erode, then shift by a
/// random offset in [-translate_px, translate_px] on each axis.
struct Perturbation {
    int dilate_px = 1;
    int erode_px = 0;
    int translate_px = 2;
};

struct SyntheticParams {
    int attempts_per_template = 5;
    Perturbation perturbation;
    /// Offset length used for "translated copy" wrong attempts.
    int incorrect_shift_px = 24;
    /// When set, every correct attempt must be matched to its own target with
    /// at least this score, otherwise generation fails.
    std::optional<double> verify_correct_at;
};

inline constexpr std::uint64_t kDefaultSeed = 20181;

/// For each template, in store order: n correct attempts (the perturbed
/// template) followed by n incorrect ones (a perturbed different template or
/// a heavily shifted copy of the target). Deterministic in (seed, store, params).
///
/// Every correct attempt is checked to score strictly higher against its
/// target than against any template disjoint from the target; a violation
/// throws GenerationCheckFailed.
std::vector<LabeledAttempt> generate_synthetic_dataset(std::uint64_t seed,
                                                       const TemplateStore& store,
                                                       const SyntheticParams& params = {});

/// Writes <root>/attempts/<id>.png and <root>/labels.tsv
/// ("attempts/<id>.png<TAB>target<TAB>label" per line).
void write_dataset(const std::filesystem::path& root, const std::vector<LabeledAttempt>& attempts);

struct LabelEntry {
    std::filesystem::path mask_path;  // resolved against the labels file directory
    std::string target_template_id;
    Label label = Label::correct;
};

std::vector<LabelEntry> read_labels(const std::filesystem::path& labels_file);

/// Loads every attempt listed in a labels file. All unreadable masks are
/// collected and reported together in a single Io error.
std::vector<LabeledAttempt> load_dataset(const std::filesystem::path& labels_file);

}  // namespace aerofit
