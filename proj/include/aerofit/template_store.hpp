#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aerofit/mask.hpp"
#include "aerofit/similarity.hpp"

namespace aerofit {

/// One exemplar pose of a routine.
struct Template {
    std::string id;
    std::string routine;
    int sequence = 1;  // 1-based position within the routine
    BinaryMask mask;
};

struct Routine {
    std::string name;
    std::vector<Template> templates;  // ascending sequence, contiguous from 1
};

inline constexpr int kMaxTemplatesPerRoutine = 3;

/// Template id used throughout: slugified routine name plus sequence,
/// e.g. ("jumping jack", 2) -> "jumping-jack-2".
std::string make_template_id(std::string_view routine, int sequence);

/// Validated, immutable collection of routines. Routine order is insertion
/// order; that order followed by sequence is the stable ordering used for
/// nearest-neighbour tie-breaking.
class TemplateStore {
public:
    TemplateStore() = default;
    /// Throws DimensionMismatch, EmptyMask, DuplicateSequence or InvalidRoutine.
    explicit TemplateStore(std::vector<Routine> routines);

    const std::vector<Routine>& routines() const noexcept { return routines_; }
    bool empty() const noexcept { return refs_.empty(); }
    std::size_t template_count() const noexcept { return refs_.size(); }

    /// Canvas size shared by every template; nullopt for an empty store.
    std::optional<std::pair<int, int>> dimensions() const;

    /// All templates in stable order, ready for nearest_template.
    std::span<const TemplateRef> refs() const noexcept { return refs_; }

    const Routine* find_routine(std::string_view name) const;
    const Template* find_template(std::string_view id) const;
    /// Flattened position of a template id, or nullopt.
    std::optional<std::size_t> position_of(std::string_view id) const;
    const Template& at(std::size_t position) const;

    TemplateStore(const TemplateStore& other) : TemplateStore(other.routines_) {}
    TemplateStore(TemplateStore&&) noexcept = default;
    TemplateStore& operator=(TemplateStore other) noexcept {
        routines_ = std::move(other.routines_);
        refs_ = std::move(other.refs_);
        flat_ = std::move(other.flat_);
        return *this;
    }

private:
    std::vector<Routine> routines_;
    std::vector<TemplateRef> refs_;
    std::vector<const Template*> flat_;
};

/// The four routines of the reference study with their template counts.
std::vector<std::pair<std::string, int>> builtin_catalog();

inline constexpr int kDefaultCanvas = 128;

/// Procedurally drawn stick silhouettes for every routine of builtin_catalog(),
/// on a square canvas of the given side (>= 64).
TemplateStore builtin_store(int canvas = kDefaultCanvas);

/// Directory layout: <root>/manifest lists one template per line as
/// "routine<TAB>sequence<TAB>relative/path.png"; '#' starts a comment.
TemplateStore load_store(const std::filesystem::path& root);
void save_store(const TemplateStore& store, const std::filesystem::path& root);

}  // namespace aerofit
