#include "aerofit/synthetic.hpp"

#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include "aerofit/error.hpp"
#include "aerofit/png_io.hpp"
#include "aerofit/similarity.hpp"

namespace aerofit {

namespace fs = std::filesystem;

std::string_view to_string(Label label) noexcept {
    return label == Label::correct ? "correct" : "incorrect";
}

Label parse_label(std::string_view text) {
    if (text == "correct") return Label::correct;
    if (text == "incorrect") return Label::incorrect;
    throw Error(ErrorCode::Parse, "unknown label '" + std::string(text) + "'");
}

namespace {

// std::uniform_int_distribution is implementation-defined; draw bounded
// integers by rejection so datasets are identical on every toolchain.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
        std::uint64_t v = 0;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    int between(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

BinaryMask perturb(const BinaryMask& base, const Perturbation& p, Draw& draw) {
    BinaryMask m = base;
    if (p.dilate_px > 0) m = dilate(m, p.dilate_px);
    if (p.erode_px > 0) m = erode(m, p.erode_px);
    if (p.translate_px > 0) {
        const int dx = draw.between(-p.translate_px, p.translate_px);
        const int dy = draw.between(-p.translate_px, p.translate_px);
        m = translate(m, dx, dy);
    }
    return m;
}

constexpr std::array<std::pair<int, int>, 8> kDirections = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

// Shift by `shift` along the first direction, starting at `first`, that keeps
// at least half of the foreground on the canvas; falls back to the direction
// keeping the most.
BinaryMask shifted_copy(const BinaryMask& mask, int shift, std::size_t first) {
    const std::size_t area = mask.foreground_count();
    std::optional<BinaryMask> best;
    for (std::size_t k = 0; k < kDirections.size(); ++k) {
        const auto [ux, uy] = kDirections[(first + k) % kDirections.size()];
        BinaryMask m = translate(mask, ux * shift, uy * shift);
        const std::size_t kept = m.foreground_count();
        if (2 * kept >= area) return m;
        if (!best || kept > best->foreground_count()) best = std::move(m);
    }
    return *best;
}

bool disjoint(const BinaryMask& a, const BinaryMask& b) {
    return overlap(a, b).intersection == 0;
}

void check_correct(const LabeledAttempt& a, const TemplateStore& store, std::size_t target_pos,
                   const SyntheticParams& params) {
    const BinaryMask& target = store.at(target_pos).mask;
    const double own = jaccard(a.mask, target).value();
    for (std::size_t j = 0; j < store.template_count(); ++j) {
        const BinaryMask& other = store.at(j).mask;
        if (j == target_pos || !disjoint(target, other)) continue;
        if (!(own > jaccard(a.mask, other).value())) {
            throw Error(ErrorCode::GenerationCheckFailed,
                        a.id + " scores no higher on its target than on disjoint " +
                            store.at(j).id);
        }
    }
    if (params.verify_correct_at) {
        const MatchResult m = nearest_template(a.mask, store.refs());
        if (m.template_id != a.target_template_id || m.alpha.value() < *params.verify_correct_at) {
            throw Error(ErrorCode::GenerationCheckFailed,
                        a.id + " matched " + m.template_id + " with alpha " +
                            std::to_string(m.alpha.value()));
        }
    }
}

}  // namespace

std::vector<LabeledAttempt> generate_synthetic_dataset(std::uint64_t seed,
                                                       const TemplateStore& store,
                                                       const SyntheticParams& params) {
    if (store.empty()) throw Error(ErrorCode::EmptyTemplateSet, "store has no templates");
    const Perturbation& p = params.perturbation;
    if (params.attempts_per_template < 0 || p.dilate_px < 0 || p.erode_px < 0 ||
        p.translate_px < 0 || params.incorrect_shift_px < 0) {
        throw Error(ErrorCode::InvalidArgument, "generator parameters must be non-negative");
    }

    Draw draw(seed);
    const std::size_t count = store.template_count();
    std::vector<LabeledAttempt> out;
    out.reserve(count * 2 * static_cast<std::size_t>(params.attempts_per_template));

    for (std::size_t t = 0; t < count; ++t) {
        const Template& target = store.at(t);
        for (int k = 1; k <= params.attempts_per_template; ++k) {
            LabeledAttempt a{target.id + "-c" + std::to_string(k), perturb(target.mask, p, draw),
                             target.id, Label::correct};
            if (a.mask.empty()) {
                throw Error(ErrorCode::GenerationCheckFailed, a.id + " lost all foreground");
            }
            check_correct(a, store, t, params);
            out.push_back(std::move(a));
        }
        for (int k = 1; k <= params.attempts_per_template; ++k) {
            const bool use_other = count > 1 && draw.below(2) == 0;
            BinaryMask base = target.mask;
            if (use_other) {
                std::size_t j = static_cast<std::size_t>(draw.below(count - 1));
                if (j >= t) ++j;
                base = store.at(j).mask;
            } else {
                base = shifted_copy(target.mask, params.incorrect_shift_px,
                                    static_cast<std::size_t>(draw.below(kDirections.size())));
            }
            LabeledAttempt a{target.id + "-i" + std::to_string(k), perturb(base, p, draw), target.id,
                             Label::incorrect};
            if (a.mask.empty()) {
                throw Error(ErrorCode::GenerationCheckFailed, a.id + " lost all foreground");
            }
            out.push_back(std::move(a));
        }
    }
    return out;
}

void write_dataset(const fs::path& root, const std::vector<LabeledAttempt>& attempts) {
    std::ostringstream labels;
    for (const auto& a : attempts) {
        const std::string rel = "attempts/" + a.id + ".png";
        png::write_mask(root / rel, a.mask);
        labels << rel << '\t' << a.target_template_id << '\t' << to_string(a.label) << '\n';
    }
    const std::string text = labels.str();
    png::write_file(root / "labels.tsv",
                    {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::vector<LabelEntry> read_labels(const fs::path& labels_file) {
    std::ifstream in(labels_file);
    if (!in) throw Error(ErrorCode::Io, "cannot open labels file " + labels_file.string());
    const fs::path base = labels_file.parent_path();
    std::vector<LabelEntry> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string s; std::getline(ss, s, '\t');) f.push_back(s);
        if (f.size() != 3 || f[0].empty() || f[1].empty()) {
            throw Error(ErrorCode::Parse, labels_file.string() + ":" + std::to_string(line_no) +
                                              ": expected path<TAB>target<TAB>label");
        }
        try {
            out.push_back(LabelEntry{base / f[0], f[1], parse_label(f[2])});
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse,
                        labels_file.string() + ":" + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return out;
}

std::vector<LabeledAttempt> load_dataset(const fs::path& labels_file) {
    const auto entries = read_labels(labels_file);
    std::vector<LabeledAttempt> out;
    std::string failures;
    for (const auto& e : entries) {
        try {
            out.push_back(LabeledAttempt{e.mask_path.stem().string(), png::read_mask(e.mask_path),
                                         e.target_template_id, e.label});
        } catch (const Error& err) {
            failures += "\n  " + e.mask_path.string() + ": " + err.detail();
        }
    }
    if (!failures.empty()) throw Error(ErrorCode::Io, "unreadable attempts:" + failures);
    return out;
}

}  // namespace aerofit
