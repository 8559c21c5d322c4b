#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "aerofit/error.hpp"
#include "aerofit/png_io.hpp"
#include "aerofit/session.hpp"

namespace aerofit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string image_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu.png", index);
    return buf;
}

}  // namespace

void append_session_log(const fs::path& dir, std::span<const SessionEvent> events,
                        std::size_t first_index) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::ofstream out(dir / "events.jsonl", std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot append to " + (dir / "events.jsonl").string());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const SessionEvent& e = events[i];
        json line;
        switch (e.kind) {
            case SessionEvent::Kind::start:
                line = {{"event", "start"},
                        {"routine", e.routine},
                        {"guide", {{"x", e.guide.x}, {"y", e.guide.y}, {"w", e.guide.w}, {"h", e.guide.h}}},
                        {"config",
                         {{"pass_threshold", e.config.pass_threshold},
                          {"max_attempts", e.config.max_attempts_per_template}}}};
                break;
            case SessionEvent::Kind::background:
            case SessionEvent::Kind::frame: {
                const std::string name = image_name(first_index + i);
                png::write_gray(dir / name, *e.image);
                line = {{"event", e.kind == SessionEvent::Kind::frame ? "frame" : "background"},
                        {"image", name}};
                break;
            }
        }
        out << line.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "write failed for " + (dir / "events.jsonl").string());
}

std::vector<SessionEvent> read_session_log(const fs::path& dir) {
    std::ifstream in(dir / "events.jsonl");
    if (!in) throw Error(ErrorCode::Io, "cannot open " + (dir / "events.jsonl").string());
    std::vector<SessionEvent> out;
    std::string text;
    int line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.empty()) continue;
        try {
            const json line = json::parse(text);
            const std::string kind = line.at("event");
            SessionEvent e;
            if (kind == "start") {
                e.kind = SessionEvent::Kind::start;
                e.routine = line.at("routine");
                const json& g = line.at("guide");
                e.guide = GuideRect{g.at("x"), g.at("y"), g.at("w"), g.at("h")};
                e.config.pass_threshold = line.at("config").at("pass_threshold");
                e.config.max_attempts_per_template = line.at("config").at("max_attempts");
            } else if (kind == "background" || kind == "frame") {
                e.kind = kind == "frame" ? SessionEvent::Kind::frame : SessionEvent::Kind::background;
                e.image = png::read_gray(dir / line.at("image").get<std::string>());
            } else {
                throw Error(ErrorCode::Parse, "unknown event '" + kind + "'");
            }
            out.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::Parse, (dir / "events.jsonl").string() + ":" +
                                              std::to_string(line_no) + ": " + ex.what());
        }
    }
    return out;
}

}  // namespace aerofit
