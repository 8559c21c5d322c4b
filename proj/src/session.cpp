#include "aerofit/session.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "aerofit/error.hpp"

namespace aerofit {

std::string_view to_string(SessionPhase phase) noexcept {
    switch (phase) {
        case SessionPhase::awaiting_background: return "awaiting-background";
        case SessionPhase::posing: return "posing";
        case SessionPhase::finished: return "finished";
    }
    return "unknown";
}

namespace {

void validate(const SessionConfig& c) {
    if (!(c.pass_threshold >= 0.0 && c.pass_threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "pass_threshold must lie in [0, 1]");
    }
    if (c.max_attempts_per_template < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_attempts_per_template must be >= 1");
    }
}

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

GuideRect centered_guide(int canvas_width, int canvas_height, int template_width,
                         int template_height) {
    return GuideRect{(canvas_width - template_width) / 2, (canvas_height - template_height) / 2,
                     template_width, template_height};
}

Session::Session(std::string id, const TemplateStore& store, std::string_view routine,
                 GuideRect guide, SessionConfig config, PipelineConfig pipeline, int canvas_width,
                 int canvas_height)
    : routine_(store.find_routine(routine)),
      pipeline_(pipeline),
      canvas_width_(canvas_width),
      canvas_height_(canvas_height) {
    if (routine_ == nullptr) {
        throw Error(ErrorCode::UnknownRoutine, "no routine named '" + std::string(routine) + "'");
    }
    validate(config);
    if (!guide.fits(canvas_width, canvas_height)) {
        throw Error(ErrorCode::OutOfBounds, "guide rectangle does not fit the " +
                                                dims(canvas_width, canvas_height) + " canvas");
    }
    const BinaryMask& first = routine_->templates.front().mask;
    if (guide.w != first.width() || guide.h != first.height()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "guide " + dims(guide.w, guide.h) + " must match template size " +
                        dims(first.width(), first.height()));
    }
    state_.session_id = std::move(id);
    state_.routine = routine_->name;
    state_.template_count = static_cast<int>(routine_->templates.size());
    state_.guide = guide;
    state_.config = config;
    state_.attempts_remaining_for_current = config.max_attempts_per_template;
    events_.push_back(SessionEvent{SessionEvent::Kind::start, routine_->name, guide, config, {}});
}

const Template* Session::current_template() const {
    if (state_.phase == SessionPhase::finished) return nullptr;
    return &routine_->templates[static_cast<std::size_t>(state_.current_sequence - 1)];
}

void Session::submit_background(const GrayImage& frame) {
    if (state_.phase != SessionPhase::awaiting_background) {
        throw Error(ErrorCode::WrongPhase, "background already captured (phase " +
                                               std::string(to_string(state_.phase)) + ")");
    }
    if (frame.width() != canvas_width_ || frame.height() != canvas_height_) {
        throw Error(ErrorCode::DimensionMismatch, "background is " +
                                                      dims(frame.width(), frame.height()) +
                                                      ", canvas is " +
                                                      dims(canvas_width_, canvas_height_));
    }
    state_.background = frame;
    state_.phase = SessionPhase::posing;
    events_.push_back(SessionEvent{SessionEvent::Kind::background, {}, {}, {}, frame});
}

FrameFeedback Session::submit_frame(const GrayImage& frame) {
    if (state_.phase != SessionPhase::posing) {
        throw Error(ErrorCode::WrongPhase,
                    "frames are accepted while posing, phase is " +
                        std::string(to_string(state_.phase)));
    }
    if (!frame.same_shape(*state_.background)) {
        throw Error(ErrorCode::DimensionMismatch, "frame is " + dims(frame.width(), frame.height()) +
                                                      ", canvas is " +
                                                      dims(canvas_width_, canvas_height_));
    }
    const BinaryMask raw = subtract_background(*state_.background, frame, pipeline_.diff_threshold);
    const BinaryMask user = crop_to_guide(clean_mask(raw, pipeline_.clean_radius), state_.guide);

    // The template is never empty, so the union is never empty either.
    const OverlapCounts ov = overlap(user, current_template()->mask);
    FrameFeedback fb;
    fb.sequence = state_.current_sequence;
    fb.alpha = SimilarityScore::from_counts(ov.intersection, ov.union_count);
    fb.display_score = fb.alpha.display();
    fb.no_subject = user.empty();
    fb.passed = fb.alpha.value() >= state_.config.pass_threshold;

    double& best = state_.per_template_best_alpha[fb.sequence];
    best = std::max(best, fb.alpha.value());
    --state_.attempts_remaining_for_current;

    if (fb.passed || state_.attempts_remaining_for_current == 0) {
        fb.advanced = true;
        if (state_.current_sequence == state_.template_count) {
            state_.phase = SessionPhase::finished;
            state_.attempts_remaining_for_current = 0;
            fb.session_finished = true;
        } else {
            ++state_.current_sequence;
            state_.attempts_remaining_for_current = state_.config.max_attempts_per_template;
            fb.next_sequence = state_.current_sequence;
        }
    }
    events_.push_back(SessionEvent{SessionEvent::Kind::frame, {}, {}, {}, frame});
    return fb;
}

SessionReport Session::report() const {
    if (state_.phase != SessionPhase::finished) {
        throw Error(ErrorCode::WrongPhase, "report is available once the session has finished");
    }
    SessionReport r;
    for (int s = 1; s <= state_.template_count; ++s) {
        const auto it = state_.per_template_best_alpha.find(s);
        const double a = it == state_.per_template_best_alpha.end() ? 0.0 : it->second;
        r.best_alpha.push_back(a);
        r.passed.push_back(a >= state_.config.pass_threshold);
    }
    const double sum = std::accumulate(r.best_alpha.begin(), r.best_alpha.end(), 0.0);
    r.game_score = 100.0 * sum / static_cast<double>(r.best_alpha.size());
    return r;
}

Session replay_session(const TemplateStore& store, const std::vector<SessionEvent>& events,
                       PipelineConfig pipeline, int canvas_width, int canvas_height,
                       std::string id) {
    if (events.empty() || events.front().kind != SessionEvent::Kind::start) {
        throw Error(ErrorCode::InvalidArgument, "session log must begin with a start event");
    }
    const SessionEvent& start = events.front();
    Session s(std::move(id), store, start.routine, start.guide, start.config, pipeline,
              canvas_width, canvas_height);
    for (std::size_t i = 1; i < events.size(); ++i) {
        const SessionEvent& e = events[i];
        if (!e.image) throw Error(ErrorCode::InvalidArgument, "image event without image");
        switch (e.kind) {
            case SessionEvent::Kind::background: s.submit_background(*e.image); break;
            case SessionEvent::Kind::frame: s.submit_frame(*e.image); break;
            case SessionEvent::Kind::start:
                throw Error(ErrorCode::InvalidArgument, "second start event at index " +
                                                            std::to_string(i));
        }
    }
    return s;
}

SessionEngine::SessionEngine(std::shared_ptr<const TemplateStore> store, EngineConfig config)
    : store_(std::move(store)), config_(std::move(config)) {
    if (!store_ || store_->empty()) {
        throw Error(ErrorCode::EmptyTemplateSet, "session engine needs a non-empty store");
    }
    validate(config_.defaults);
    const auto [tw, th] = *store_->dimensions();
    if (config_.canvas_width == 0) config_.canvas_width = tw;
    if (config_.canvas_height == 0) config_.canvas_height = th;
    if (config_.canvas_width < tw || config_.canvas_height < th) {
        throw Error(ErrorCode::DimensionMismatch, "canvas smaller than the templates");
    }
}

std::string SessionEngine::start_session(std::string_view routine, std::optional<GuideRect> guide,
                                         std::optional<SessionConfig> config) {
    const auto [tw, th] = *store_->dimensions();
    const GuideRect g =
        guide.value_or(centered_guide(config_.canvas_width, config_.canvas_height, tw, th));
    std::unique_lock lock(map_mutex_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id_));
    auto entry = std::make_shared<Entry>(
        Session(buf, *store_, routine, g, config.value_or(config_.defaults), config_.pipeline,
                config_.canvas_width, config_.canvas_height));
    ++next_id_;
    sessions_.emplace(buf, entry);
    lock.unlock();
    std::lock_guard session_lock(entry->mutex);
    flush_log(*entry);
    return buf;
}

std::shared_ptr<SessionEngine::Entry> SessionEngine::find(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
    return it->second;
}

void SessionEngine::flush_log(Entry& entry) {
    if (!config_.log_dir) return;
    const auto& ev = entry.session.events();
    if (entry.logged == ev.size()) return;
    append_session_log(*config_.log_dir / entry.session.state().session_id,
                       std::span(ev).subspan(entry.logged), entry.logged);
    entry.logged = ev.size();
}

void SessionEngine::submit_background(const std::string& id, const GrayImage& frame) {
    const auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    entry->session.submit_background(frame);
    flush_log(*entry);
}

FrameFeedback SessionEngine::submit_frame(const std::string& id, const GrayImage& frame) {
    const auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    FrameFeedback fb = entry->session.submit_frame(frame);
    flush_log(*entry);
    return fb;
}

SessionState SessionEngine::state(const std::string& id) const {
    const auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return entry->session.state();
}

SessionReport SessionEngine::report(const std::string& id) const {
    const auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return entry->session.report();
}

std::vector<SessionEvent> SessionEngine::events(const std::string& id) const {
    const auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return entry->session.events();
}

}  // namespace aerofit
