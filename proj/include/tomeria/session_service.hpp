#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "tomeria/analyzer.hpp"
#include "tomeria/error.hpp"
#include "tomeria/lever_world.hpp"
#include "tomeria/story.hpp"

namespace httplib {
class Server;
}

namespace tomeria {

enum class SessionMode { Tombs, Story };

struct StoryParams {
  std::uint64_t seed = 1;
  int branching = 2;
  int depth = 6;
  std::uint64_t sessionSeed = 1;
};

Json story_params_to_json(const StoryParams& p);
StoryParams story_params_from_json(const Json& j);

/// Level creation request: either {"spec": LevelSpec} verbatim, or
/// {"base", "levers" | "leverPlan", "start"?, "targets"?} run through
/// objective placement.
LevelSpec level_from_request(const Json& body, const AnalysisOptions& options = {});

/// Runs a scripted story ("peek:<choice>:<d>,choose:<choice>,...") and
/// returns {storyParams, script, log, visions, finalNode, ended}.
Json simulate_story(const StoryParams& params, std::string_view script);

/// Live state reconstructed from a transcript.
using SessionState = std::variant<GameState, StorySession>;

/// Applies one transcript action ({op, ...}) to a state. Throws the owning
/// module's error on illegal actions; preview is not an action.
void apply_action(SessionState& state, const Json& action);

/// Rebuilds the terminal state from an exported transcript.
SessionState replay_transcript(const Json& transcript);

Json tombs_view(const GameState& state);
Json story_view(const StorySession& session);

/// HTTP status used for a module error code.
int http_status(ErrorCode code);

struct HttpResult {
  int status = 200;
  Json body;
};

struct ServiceConfig {
  std::filesystem::path store = "tomeria-store";
  AnalysisOptions analysis{};
};

/// Stateful facade over both game modes. Safe to call from many threads:
/// sessions are independent, and each session admits one mutation at a time
/// (a second concurrent or stale-revision mutation gets revision-conflict).
class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  /// Routes one request; never throws. Path excludes the query string.
  HttpResult handle(std::string_view method, std::string_view path, std::string_view body);

  Json create_level(const Json& body);
  Json get_level(const std::string& id);
  Json create_session(const Json& body);
  Json get_session(const std::string& id);
  Json mutate(const std::string& id, const Json& action, std::optional<std::uint64_t> expectedRevision);
  Json preview(const std::string& id, int lever);
  Json transcript(const std::string& id);

 private:
  struct Slot;
  struct LevelEntry {
    std::shared_ptr<const LevelSpec> spec;
    Json document;
  };

  std::shared_ptr<Slot> find_session(const std::string& id);
  LevelEntry find_level(const std::string& id);
  void persist_session(const Slot& slot);
  std::string new_id();

  ServiceConfig config_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::map<std::string, LevelEntry> levels_;
  std::uint64_t idCounter_ = 0;
  std::uint64_t idSalt_ = 0;
};

/// Registers every endpoint of `service` on `server`. When staticDir is set it
/// is mounted at "/" for the browser client.
void bind_routes(httplib::Server& server, SessionService& service,
                 const std::optional<std::filesystem::path>& staticDir = std::nullopt);

}  // namespace tomeria
