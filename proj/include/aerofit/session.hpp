#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "aerofit/mask.hpp"
#include "aerofit/similarity.hpp"
#include "aerofit/template_store.hpp"

namespace aerofit {

enum class SessionPhase { awaiting_background, posing, finished };

std::string_view to_string(SessionPhase phase) noexcept;

struct SessionConfig {
    double pass_threshold = 0.8;
    int max_attempts_per_template = 3;

    friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

/// Frame-to-mask pipeline settings shared by every session of an engine.
struct PipelineConfig {
    int diff_threshold = kDefaultDiffThreshold;
    int clean_radius = kDefaultCleanRadius;
};

struct SessionState {
    std::string session_id;
    std::string routine;
    SessionPhase phase = SessionPhase::awaiting_background;
    int current_sequence = 1;
    int template_count = 0;
    std::optional<GrayImage> background;
    GuideRect guide;
    SessionConfig config;
    std::map<int, double> per_template_best_alpha;
    int attempts_remaining_for_current = 0;
};

struct FrameFeedback {
    int sequence = 1;  // template the frame was scored against
    SimilarityScore alpha;
    int display_score = 0;
    bool passed = false;
    bool advanced = false;
    std::optional<int> next_sequence;
    bool session_finished = false;
    bool no_subject = false;  // background-subtracted frame had no foreground

    friend bool operator==(const FrameFeedback&, const FrameFeedback&) = default;
};

struct SessionReport {
    std::vector<double> best_alpha;  // index i is sequence i + 1
    std::vector<bool> passed;
    double game_score = 0.0;  // 100 x mean best alpha

    friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

/// One accepted input of a session, enough to replay it.
struct SessionEvent {
    enum class Kind { start, background, frame };
    Kind kind = Kind::start;
    std::string routine;   // start only
    GuideRect guide;       // start only
    SessionConfig config;  // start only
    std::optional<GrayImage> image;  // background / frame
};

/// Single-user state machine: awaiting-background -> posing -> finished.
/// Not thread-safe; SessionEngine serialises access.
class Session {
public:
    /// Throws UnknownRoutine, OutOfBounds (guide outside canvas),
    /// DimensionMismatch (guide size differs from templates) or InvalidArgument.
    Session(std::string id, const TemplateStore& store, std::string_view routine, GuideRect guide,
            SessionConfig config, PipelineConfig pipeline, int canvas_width, int canvas_height);

    void submit_background(const GrayImage& frame);
    FrameFeedback submit_frame(const GrayImage& frame);
    SessionReport report() const;

    const SessionState& state() const noexcept { return state_; }
    const std::vector<SessionEvent>& events() const noexcept { return events_; }
    /// Template the user should currently mimic; nullptr once finished.
    const Template* current_template() const;

private:
    SessionState state_;
    const Routine* routine_;
    PipelineConfig pipeline_;
    int canvas_width_;
    int canvas_height_;
    std::vector<SessionEvent> events_;
};

/// Guide of template size centred on the canvas.
GuideRect centered_guide(int canvas_width, int canvas_height, int template_width,
                         int template_height);

struct EngineConfig {
    /// Frame size; 0 means "same as the template canvas".
    int canvas_width = 0;
    int canvas_height = 0;
    PipelineConfig pipeline;
    SessionConfig defaults;
    /// When set, every session appends its events under <dir>/<session id>/.
    std::optional<std::filesystem::path> log_dir;
};

/// Thread-safe registry of independent sessions over a shared read-only store.
class SessionEngine {
public:
    SessionEngine(std::shared_ptr<const TemplateStore> store, EngineConfig config);

    std::string start_session(std::string_view routine, std::optional<GuideRect> guide = {},
                              std::optional<SessionConfig> config = {});
    void submit_background(const std::string& id, const GrayImage& frame);
    FrameFeedback submit_frame(const std::string& id, const GrayImage& frame);
    SessionState state(const std::string& id) const;
    SessionReport report(const std::string& id) const;
    std::vector<SessionEvent> events(const std::string& id) const;

    const TemplateStore& store() const noexcept { return *store_; }
    const EngineConfig& config() const noexcept { return config_; }
    int canvas_width() const noexcept { return config_.canvas_width; }
    int canvas_height() const noexcept { return config_.canvas_height; }

private:
    struct Entry {
        explicit Entry(Session s) : session(std::move(s)) {}
        std::mutex mutex;
        Session session;
        std::size_t logged = 0;
    };
    std::shared_ptr<Entry> find(const std::string& id) const;
    void flush_log(Entry& entry);

    std::shared_ptr<const TemplateStore> store_;
    EngineConfig config_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// Feeds a recorded event list through a fresh Session. The first event must
/// be a start event.
Session replay_session(const TemplateStore& store, const std::vector<SessionEvent>& events,
                       PipelineConfig pipeline, int canvas_width, int canvas_height,
                       std::string id = "replay");

/// Append-only on-disk log: <dir>/events.jsonl plus one PNG per image event.
void append_session_log(const std::filesystem::path& dir, std::span<const SessionEvent> events,
                        std::size_t first_index);
std::vector<SessionEvent> read_session_log(const std::filesystem::path& dir);

}  // namespace aerofit
