#pragma once

#include <httplib.h>
#include <json.hpp>

#include <functional>
#include <string>

#include "aerofit/error.hpp"
#include "aerofit/session.hpp"

namespace aerofit::http {

nlohmann::json to_json(const FrameFeedback& fb);
nlohmann::json to_json(const SessionReport& report);
/// Summary of a session without the stored background image.
nlohmann::json to_json(const SessionState& state, const TemplateStore& store);
nlohmann::json catalog_json(const TemplateStore& store);

/// HTTP status for a library error code.
int status_for(ErrorCode code) noexcept;

using RequestLogger = std::function<void(const std::string& line)>;

/// Registers the session API on `server`:
///   GET  /routines                   catalog
///   POST /sessions                   {routine, guide?, config?} -> 201 {session_id}
///   POST /sessions/{id}/background   PNG body -> 204
///   POST /sessions/{id}/frame        PNG body -> FrameFeedback
///   GET  /sessions/{id}              state summary
///   GET  /sessions/{id}/report       SessionReport
///   GET  /templates/{id}/mask.png    template mask
/// Errors are returned as {error, detail} with a 4xx status.
void install_routes(httplib::Server& server, SessionEngine& engine, RequestLogger log = {});

}  // namespace aerofit::http
