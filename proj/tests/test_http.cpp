#include <doctest.h>

#include <thread>

#include "aerofit/http_api.hpp"
#include "aerofit/png_io.hpp"
#include "frames.hpp"
#include "test_util.hpp"

using namespace aerofit;
using nlohmann::json;

namespace {

// Runs the API on an ephemeral port for the lifetime of the fixture.
class LiveServer {
public:
    explicit LiveServer(EngineConfig cfg = {})
        : store_(std::make_shared<const TemplateStore>(builtin_store())), engine_(store_, std::move(cfg)) {
        http::install_routes(server_, engine_, [this](const std::string& l) {
            std::lock_guard lock(log_mutex_);
            log_.push_back(l);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LiveServer() {
        server_.stop();
        thread_.join();
    }

    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }
    const TemplateStore& store() const { return *store_; }
    std::vector<std::string> log() {
        std::lock_guard lock(log_mutex_);
        return log_;
    }

private:
    std::shared_ptr<const TemplateStore> store_;
    SessionEngine engine_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex log_mutex_;
    std::vector<std::string> log_;
};

std::string png_body(const GrayImage& img) {
    const auto bytes = png::encode_gray(img);
    return {bytes.begin(), bytes.end()};
}

}  // namespace

TEST_CASE("routines and template masks") {
    LiveServer srv;
    auto cli = srv.client();
    const auto res = cli.Get("/routines");
    REQUIRE(res);
    CHECK(res->status == 200);
    const json body = json::parse(res->body);
    REQUIRE(body["routines"].size() == 4);
    CHECK(body["routines"][0]["name"] == "jumping jack");
    CHECK(body["routines"][0]["template_count"] == 3);
    CHECK(body["routines"][0]["templates"][1]["id"] == "jumping-jack-2");

    const auto mask = cli.Get("/templates/squat-3/mask.png");
    REQUIRE(mask);
    CHECK(mask->status == 200);
    CHECK(mask->get_header_value("Content-Type") == "image/png");
    const std::vector<std::uint8_t> bytes(mask->body.begin(), mask->body.end());
    CHECK(png::decode_mask(bytes) == srv.store().find_template("squat-3")->mask);

    const auto missing = cli.Get("/templates/nope-1/mask.png");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body)["error"] == "UnknownTemplate");
}

TEST_CASE("full scripted session over HTTP") {
    LiveServer srv;
    auto cli = srv.client();
    const auto created = cli.Post("/sessions", R"({"routine":"jumping jack"})", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const std::string id = json::parse(created->body)["session_id"];

    auto state = json::parse(cli.Get("/sessions/" + id)->body);
    CHECK(state["phase"] == "awaiting-background");
    CHECK(state["current_template_id"] == "jumping-jack-1");

    const GrayImage bg = frames::background(128, 128, 77);
    const auto early = cli.Post("/sessions/" + id + "/frame", png_body(bg), "image/png");
    CHECK(early->status == 409);
    CHECK(json::parse(early->body)["error"] == "WrongPhase");

    const auto bgres = cli.Post("/sessions/" + id + "/background", png_body(bg), "image/png");
    REQUIRE(bgres);
    CHECK(bgres->status == 204);
    CHECK(cli.Post("/sessions/" + id + "/background", png_body(bg), "image/png")->status == 409);

    const auto report_early = cli.Get("/sessions/" + id + "/report");
    CHECK(report_early->status == 409);

    for (int seq = 1; seq <= 3; ++seq) {
        const auto& mask = srv.store().find_template("jumping-jack-" + std::to_string(seq))->mask;
        const auto res = cli.Post("/sessions/" + id + "/frame", png_body(frames::composite(bg, mask, 0, 0)), "image/png");
        REQUIRE(res);
        CHECK(res->status == 200);
        const json fb = json::parse(res->body);
        CHECK(fb["alpha"] == 1.0);
        CHECK(fb["display_score"] == 100);
        CHECK(fb["passed"] == true);
        CHECK(fb["session_finished"] == (seq == 3));
        if (seq < 3) CHECK(fb["next_sequence"] == seq + 1);
        else CHECK(fb["next_sequence"].is_null());
    }
    state = json::parse(cli.Get("/sessions/" + id)->body);
    CHECK(state["phase"] == "finished");
    CHECK(state["current_template_id"].is_null());

    const json report = json::parse(cli.Get("/sessions/" + id + "/report")->body);
    CHECK(report["game_score"] == 100.0);
    CHECK(report["passed"] == json::array({true, true, true}));

    // The request logger runs after the response is written.
    auto log = srv.log();
    for (int i = 0; i < 100 && (log.empty() || log.back().find("/report 200") == std::string::npos); ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        log = srv.log();
    }
    CHECK(log.size() >= 9);
    CHECK(log.front() == "POST /sessions 201");
    CHECK(log.back() == "GET /sessions/" + id + "/report 200");
}

TEST_CASE("error mapping") {
    LiveServer srv;
    auto cli = srv.client();
    auto res = cli.Post("/sessions", R"({"routine":"cartwheel"})", "application/json");
    CHECK(res->status == 404);
    CHECK(json::parse(res->body)["error"] == "UnknownRoutine");

    res = cli.Post("/sessions", "{not json", "application/json");
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).contains("detail"));

    res = cli.Post("/sessions", R"({"routine":"squat","config":{"pass_threshold":2}})", "application/json");
    CHECK(res->status == 400);

    res = cli.Post("/sessions", R"({"routine":"squat","guide":{"x":10,"y":0,"w":128,"h":128}})", "application/json");
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["error"] == "OutOfBounds");

    CHECK(cli.Get("/sessions/zzz")->status == 404);

    res = cli.Post("/sessions", R"({"routine":"squat","config":{"max_attempts":1,"pass_threshold":0.5}})", "application/json");
    REQUIRE(res->status == 201);
    const std::string id = json::parse(res->body)["session_id"];
    const auto state = json::parse(cli.Get("/sessions/" + id)->body);
    CHECK(state["config"]["max_attempts"] == 1);
    CHECK(state["config"]["pass_threshold"] == 0.5);

    res = cli.Post("/sessions/" + id + "/background", "garbage", "image/png");
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["error"] == "InvalidPng");
    res = cli.Post("/sessions/" + id + "/background", png_body(GrayImage(64, 64)), "image/png");
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["error"] == "DimensionMismatch");
}

TEST_CASE("RGB frames are accepted") {
    LiveServer srv;
    auto cli = srv.client();
    const std::string id = json::parse(cli.Post("/sessions", R"({"routine":"squat"})", "application/json")->body)["session_id"];
    std::vector<std::uint8_t> rgb(3 * 128 * 128, 40);
    const auto bytes = png::encode_rgb(rgb, 128, 128);
    CHECK(cli.Post("/sessions/" + id + "/background", std::string(bytes.begin(), bytes.end()), "image/png")->status == 204);
    const auto res = cli.Post("/sessions/" + id + "/frame", std::string(bytes.begin(), bytes.end()), "image/png");
    REQUIRE(res->status == 200);
    CHECK(json::parse(res->body)["no_subject"] == true);
}
