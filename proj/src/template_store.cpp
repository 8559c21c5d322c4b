#include "aerofit/template_store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "aerofit/error.hpp"
#include "aerofit/png_io.hpp"

namespace aerofit {

namespace fs = std::filesystem;

std::string make_template_id(std::string_view routine, int sequence) {
    std::string slug;
    bool dash = false;
    for (char c : routine) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            if (dash && !slug.empty()) slug.push_back('-');
            slug.push_back(static_cast<char>(std::tolower(u)));
            dash = false;
        } else {
            dash = true;
        }
    }
    return slug + "-" + std::to_string(sequence);
}

TemplateStore::TemplateStore(std::vector<Routine> routines) : routines_(std::move(routines)) {
    std::optional<std::pair<int, int>> dims;
    std::map<std::string, bool> seen_ids;
    for (auto& r : routines_) {
        if (r.name.empty()) throw Error(ErrorCode::InvalidRoutine, "routine with empty name");
        for (const auto& other : routines_) {
            if (&other != &r && other.name == r.name) {
                throw Error(ErrorCode::InvalidRoutine, "routine '" + r.name + "' listed twice");
            }
        }
        if (r.templates.empty() || r.templates.size() > kMaxTemplatesPerRoutine) {
            throw Error(ErrorCode::InvalidRoutine,
                        "routine '" + r.name + "' has " + std::to_string(r.templates.size()) +
                            " templates; expected 1 to " +
                            std::to_string(kMaxTemplatesPerRoutine));
        }
        std::stable_sort(r.templates.begin(), r.templates.end(),
                         [](const Template& a, const Template& b) { return a.sequence < b.sequence; });
        for (std::size_t i = 0; i < r.templates.size(); ++i) {
            Template& t = r.templates[i];
            if (i > 0 && t.sequence == r.templates[i - 1].sequence) {
                throw Error(ErrorCode::DuplicateSequence,
                            "routine '" + r.name + "' repeats sequence " +
                                std::to_string(t.sequence));
            }
            if (t.sequence != static_cast<int>(i) + 1) {
                throw Error(ErrorCode::InvalidRoutine,
                            "routine '" + r.name + "' sequences are not contiguous from 1");
            }
            t.routine = r.name;
            if (t.id.empty()) t.id = make_template_id(r.name, t.sequence);
            if (seen_ids[t.id]) throw Error(ErrorCode::InvalidRoutine, "duplicate template id " + t.id);
            seen_ids[t.id] = true;
            if (t.mask.empty()) {
                throw Error(ErrorCode::EmptyMask, "template " + t.id + " has no foreground pixels");
            }
            const std::pair<int, int> d{t.mask.width(), t.mask.height()};
            if (dims && *dims != d) {
                throw Error(ErrorCode::DimensionMismatch,
                            "template " + t.id + " is " + std::to_string(d.first) + "x" +
                                std::to_string(d.second) + " but store canvas is " +
                                std::to_string(dims->first) + "x" + std::to_string(dims->second));
            }
            dims = d;
        }
    }
    for (const auto& r : routines_) {
        for (const auto& t : r.templates) {
            refs_.push_back(TemplateRef{t.id, &t.mask});
            flat_.push_back(&t);
        }
    }
}

std::optional<std::pair<int, int>> TemplateStore::dimensions() const {
    if (flat_.empty()) return std::nullopt;
    return std::pair{flat_.front()->mask.width(), flat_.front()->mask.height()};
}

const Routine* TemplateStore::find_routine(std::string_view name) const {
    for (const auto& r : routines_) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

std::optional<std::size_t> TemplateStore::position_of(std::string_view id) const {
    for (std::size_t i = 0; i < flat_.size(); ++i) {
        if (flat_[i]->id == id) return i;
    }
    return std::nullopt;
}

const Template* TemplateStore::find_template(std::string_view id) const {
    const auto pos = position_of(id);
    return pos ? flat_[*pos] : nullptr;
}

const Template& TemplateStore::at(std::size_t position) const {
    if (position >= flat_.size()) {
        throw Error(ErrorCode::OutOfBounds, "template position " + std::to_string(position));
    }
    return *flat_[position];
}

std::vector<std::pair<std::string, int>> builtin_catalog() {
    return {
        {"jumping jack", 3},
        {"squat", 3},
        {"lateral flexion stretches", 3},
        {"shoulder front raises", 3},
    };
}

TemplateStore load_store(const fs::path& root) {
    const fs::path manifest = root / "manifest";
    std::ifstream in(manifest);
    if (!in) throw Error(ErrorCode::MissingManifest, "cannot open " + manifest.string());

    std::vector<Routine> routines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
        if (fields.size() != 3 || fields[0].empty() || fields[2].empty()) {
            throw Error(ErrorCode::Parse, manifest.string() + ":" + std::to_string(line_no) +
                                              ": expected routine<TAB>sequence<TAB>path");
        }
        int sequence = 0;
        try {
            std::size_t used = 0;
            sequence = std::stoi(fields[1], &used);
            if (used != fields[1].size() || sequence < 1) throw std::invalid_argument("seq");
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, manifest.string() + ":" + std::to_string(line_no) +
                                              ": bad sequence '" + fields[1] + "'");
        }
        const fs::path png = root / fields[2];
        if (!fs::is_regular_file(png)) {
            throw Error(ErrorCode::MissingManifest,
                        manifest.string() + ":" + std::to_string(line_no) + ": missing mask " +
                            png.string());
        }
        auto it = std::find_if(routines.begin(), routines.end(),
                               [&](const Routine& r) { return r.name == fields[0]; });
        if (it == routines.end()) {
            routines.push_back(Routine{fields[0], {}});
            it = std::prev(routines.end());
        }
        for (const auto& t : it->templates) {
            if (t.sequence == sequence) {
                throw Error(ErrorCode::DuplicateSequence,
                            "routine '" + fields[0] + "' repeats sequence " + fields[1]);
            }
        }
        it->templates.push_back(
            Template{make_template_id(fields[0], sequence), fields[0], sequence, png::read_mask(png)});
    }
    return TemplateStore(std::move(routines));
}

void save_store(const TemplateStore& store, const fs::path& root) {
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + root.string() + ": " + ec.message());

    std::ostringstream manifest;
    manifest << "# routine\tsequence\tpath\n";
    for (const auto& r : store.routines()) {
        for (const auto& t : r.templates) {
            const std::string rel = "templates/" + t.id + ".png";
            png::write_mask(root / rel, t.mask);
            manifest << r.name << '\t' << t.sequence << '\t' << rel << '\n';
        }
    }
    const std::string text = manifest.str();
    png::write_file(root / "manifest",
                    {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace aerofit
