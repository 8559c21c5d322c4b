#include "aerofit/http_api.hpp"

#include "aerofit/png_io.hpp"

namespace aerofit::http {

using nlohmann::json;

nlohmann::json to_json(const FrameFeedback& fb) {
    return {{"sequence", fb.sequence},
            {"alpha", fb.alpha.value()},
            {"display_score", fb.display_score},
            {"passed", fb.passed},
            {"advanced", fb.advanced},
            {"next_sequence", fb.next_sequence ? json(*fb.next_sequence) : json(nullptr)},
            {"session_finished", fb.session_finished},
            {"no_subject", fb.no_subject}};
}

nlohmann::json to_json(const SessionReport& report) {
    json passed = json::array();
    for (bool p : report.passed) passed.push_back(p);
    return {{"best_alpha", report.best_alpha}, {"passed", passed}, {"game_score", report.game_score}};
}

nlohmann::json to_json(const SessionState& s, const TemplateStore& store) {
    json best = json::object();
    for (const auto& [seq, alpha] : s.per_template_best_alpha) best[std::to_string(seq)] = alpha;
    json current = nullptr;
    if (s.phase != SessionPhase::finished) {
        current = store.find_routine(s.routine)
                      ->templates[static_cast<std::size_t>(s.current_sequence - 1)]
                      .id;
    }
    return {{"session_id", s.session_id},
            {"routine", s.routine},
            {"phase", std::string(to_string(s.phase))},
            {"current_sequence", s.current_sequence},
            {"current_template_id", current},
            {"template_count", s.template_count},
            {"has_background", s.background.has_value()},
            {"guide", {{"x", s.guide.x}, {"y", s.guide.y}, {"w", s.guide.w}, {"h", s.guide.h}}},
            {"config",
             {{"pass_threshold", s.config.pass_threshold},
              {"max_attempts", s.config.max_attempts_per_template}}},
            {"per_template_best_alpha", best},
            {"attempts_remaining_for_current", s.attempts_remaining_for_current}};
}

nlohmann::json catalog_json(const TemplateStore& store) {
    json routines = json::array();
    for (const auto& r : store.routines()) {
        json templates = json::array();
        for (const auto& t : r.templates) templates.push_back({{"id", t.id}, {"sequence", t.sequence}});
        routines.push_back({{"name", r.name},
                            {"template_count", r.templates.size()},
                            {"templates", templates}});
    }
    return {{"routines", routines}};
}

int status_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownRoutine:
        case ErrorCode::UnknownSession:
        case ErrorCode::UnknownTemplate: return 404;
        case ErrorCode::WrongPhase: return 409;
        case ErrorCode::DimensionMismatch:
        case ErrorCode::OutOfBounds:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidPng:
        case ErrorCode::Parse: return 400;
        default: return 500;
    }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view error, const std::string& detail) {
    send_json(res, status, {{"error", error}, {"detail", detail}});
}

std::span<const std::uint8_t> body_bytes(const httplib::Request& req) {
    return {reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()};
}

// Runs a handler, translating library and JSON errors into {error, detail}.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, status_for(e.code()), to_string(e.code()), e.detail());
        } catch (const json::exception& e) {
            send_error(res, 400, "BadRequest", e.what());
        }
    };
}

SessionConfig parse_config(const json& body, const SessionConfig& defaults) {
    SessionConfig c = defaults;
    if (body.contains("config") && !body["config"].is_null()) {
        const json& j = body["config"];
        if (j.contains("pass_threshold")) c.pass_threshold = j.at("pass_threshold").get<double>();
        if (j.contains("max_attempts")) c.max_attempts_per_template = j.at("max_attempts").get<int>();
    }
    return c;
}

}  // namespace

void install_routes(httplib::Server& server, SessionEngine& engine, RequestLogger log) {
    server.Get("/routines", guarded([&engine](const httplib::Request&, httplib::Response& res) {
                   send_json(res, 200, catalog_json(engine.store()));
               }));

    server.Post("/sessions", guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                    const json body = req.body.empty() ? json::object() : json::parse(req.body);
                    if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "body must be an object");
                    const std::string routine = body.at("routine").get<std::string>();
                    std::optional<GuideRect> guide;
                    if (body.contains("guide") && !body["guide"].is_null()) {
                        const json& g = body["guide"];
                        guide = GuideRect{g.at("x").get<int>(), g.at("y").get<int>(),
                                          g.at("w").get<int>(), g.at("h").get<int>()};
                    }
                    const std::string id = engine.start_session(
                        routine, guide, parse_config(body, engine.config().defaults));
                    send_json(res, 201, {{"session_id", id}});
                }));

    server.Post(R"(/sessions/([^/]+)/background)",
                guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                    engine.submit_background(req.matches[1], png::decode_gray(body_bytes(req)));
                    res.status = 204;
                }));

    server.Post(R"(/sessions/([^/]+)/frame)",
                guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                    const FrameFeedback fb =
                        engine.submit_frame(req.matches[1], png::decode_gray(body_bytes(req)));
                    send_json(res, 200, to_json(fb));
                }));

    server.Get(R"(/sessions/([^/]+)/report)",
               guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, to_json(engine.report(req.matches[1])));
               }));

    server.Get(R"(/sessions/([^/]+))",
               guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, to_json(engine.state(req.matches[1]), engine.store()));
               }));

    server.Get(R"(/templates/([^/]+)/mask\.png)",
               guarded([&engine](const httplib::Request& req, httplib::Response& res) {
                   const Template* t = engine.store().find_template(req.matches[1].str());
                   if (t == nullptr) {
                       throw Error(ErrorCode::UnknownTemplate, "no template '" + req.matches[1].str() + "'");
                   }
                   const auto png = png::encode_mask(t->mask);
                   res.set_content(std::string(png.begin(), png.end()), "image/png");
               }));

    if (log) {
        server.set_logger([log](const httplib::Request& req, const httplib::Response& res) {
            log(req.method + " " + req.path + " " + std::to_string(res.status));
        });
    }
}

}  // namespace aerofit::http
