#include "tomeria/session_service.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "httplib.h"
#include "tomeria/error.hpp"
#include "tomeria/placement.hpp"

namespace tomeria {

namespace {

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view mode_name(SessionMode m) { return m == SessionMode::Tombs ? "TOMBS" : "STORY"; }

SessionMode parse_mode(std::string_view s) {
  if (s == "TOMBS") return SessionMode::Tombs;
  if (s == "STORY") return SessionMode::Story;
  fail(ErrorCode::InvalidArgument, "mode must be \"TOMBS\" or \"STORY\"");
}

bool is_token(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Json> read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::InvalidArgument, std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::InvalidArgument, std::string("field \"") + key + "\" has the wrong type");
  }
}

bool is_tombs_op(std::string_view op) { return op == "move" || op == "flip"; }
bool is_story_op(std::string_view op) { return op == "peek" || op == "choose"; }

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

int parse_int(std::string_view s) {
  int v = 0;
  if (s.empty() || s.size() > 9) fail(ErrorCode::InvalidArgument, "expected an integer");
  for (char c : s) {
    if (c < '0' || c > '9') fail(ErrorCode::InvalidArgument, "expected an integer");
    v = v * 10 + (c - '0');
  }
  return v;
}

Json error_body(ErrorCode code, const std::string& message) {
  Json j;
  j["error"] = std::string(error_code_name(code));
  j["message"] = message;
  if (code == ErrorCode::PlacementFailure) j["retry"] = "retry with a different seed";
  return j;
}

}  // namespace

Json story_params_to_json(const StoryParams& p) {
  Json j;
  j["seed"] = p.seed;
  j["b"] = p.branching;
  j["D"] = p.depth;
  j["sessionSeed"] = p.sessionSeed;
  return j;
}

StoryParams story_params_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "storyParams must be an object");
  StoryParams p;
  try {
    p.seed = j.value("seed", p.seed);
    p.branching = j.value("b", p.branching);
    p.depth = j.value("D", p.depth);
    p.sessionSeed = j.value("sessionSeed", p.seed);
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::InvalidArgument, "storyParams fields have the wrong type");
  }
  return p;
}

void apply_action(SessionState& state, const Json& action) {
  const auto op = field<std::string>(action, "op");
  if (auto* game = std::get_if<GameState>(&state)) {
    if (op == "move") {
      *game = move(*game, parse_direction(field<std::string>(action, "arg")));
    } else if (op == "flip") {
      *game = flip(*game, field<int>(action, "arg"));
    } else if (is_story_op(op)) {
      fail(ErrorCode::ModeMismatch, "action \"" + op + "\" is not available in TOMBS mode");
    } else {
      fail(ErrorCode::InvalidArgument, "unknown action \"" + op + "\"");
    }
    return;
  }
  auto& story = std::get<StorySession>(state);
  if (op == "peek") {
    story.peek(field<int>(action, "choice"), field<int>(action, "d"));
  } else if (op == "choose") {
    story.choose(field<int>(action, "choice"));
  } else if (is_tombs_op(op)) {
    fail(ErrorCode::ModeMismatch, "action \"" + op + "\" is not available in STORY mode");
  } else {
    fail(ErrorCode::InvalidArgument, "unknown action \"" + op + "\"");
  }
}

namespace {

SessionState initial_state(SessionMode mode, const Json& origin) {
  if (mode == SessionMode::Tombs) {
    return GameState::begin(std::make_shared<const LevelSpec>(level_from_json(origin)));
  }
  const StoryParams p = story_params_from_json(origin);
  auto tree = std::make_shared<const StoryTree>(generate_story_tree(p.seed, p.branching, p.depth));
  return StorySession(std::move(tree), p.sessionSeed);
}

}  // namespace

Json simulate_story(const StoryParams& params, std::string_view script) {
  auto tree = std::make_shared<const StoryTree>(
      generate_story_tree(params.seed, params.branching, params.depth));
  StorySession session(std::move(tree), params.sessionSeed);
  const std::vector<Vision> visions = run_story_script(session, script);
  Json out;
  out["storyParams"] = story_params_to_json(params);
  out["script"] = std::string(script);
  out["log"] = session.log();
  out["visions"] = Json::array();
  for (const Vision& v : visions) out["visions"].push_back(vision_to_json(v));
  out["finalNode"] = session.current().id;
  out["ended"] = session.ended();
  return out;
}

SessionState replay_transcript(const Json& transcript) {
  const SessionMode mode = parse_mode(field<std::string>(transcript, "mode"));
  const Json& origin = transcript.at(mode == SessionMode::Tombs ? "level" : "storyParams");
  SessionState state = initial_state(mode, origin);
  for (const Json& action : transcript.value("actions", Json::array())) apply_action(state, action);
  return state;
}

Json tombs_view(const GameState& s) {
  const LevelSpec& spec = s.spec();
  Json j;
  j["mode"] = "TOMBS";
  j["width"] = spec.base.width;
  j["height"] = spec.base.height;
  j["config"] = s.config().to_string();
  j["player"] = cell_to_json(s.player());
  j["exit"] = cell_to_json(spec.exit);
  Json levers = Json::array();
  for (const Lever& l : spec.levers) {
    Json lj = lever_to_json(l);
    lj["state"] = s.config()[static_cast<std::size_t>(l.id)] == LeverState::Right ? "RIGHT" : "LEFT";
    levers.push_back(std::move(lj));
  }
  j["levers"] = std::move(levers);
  Json treasures = Json::array();
  for (Cell t : spec.treasures) treasures.push_back(cell_to_json(t));
  j["treasures"] = std::move(treasures);
  Json collected = Json::array();
  for (Cell t : s.collected()) collected.push_back(cell_to_json(t));
  j["collected"] = std::move(collected);
  j["flipCount"] = s.flip_count();
  j["complete"] = s.complete();
  j["preview"] = spec.previewEnabled;
  Json rows = Json::array();
  const std::string text = grid_rows(s.grid());
  for (std::size_t i = 0; i < text.size(); i += static_cast<std::size_t>(spec.base.width) + 1) {
    rows.push_back(text.substr(i, static_cast<std::size_t>(spec.base.width)));
  }
  j["grid"] = std::move(rows);
  return j;
}

Json story_view(const StorySession& s) {
  const StoryNode& n = s.current();
  Json j;
  j["mode"] = "STORY";
  Json node;
  node["id"] = n.id;
  node["depth"] = n.depth;
  node["sceneText"] = n.sceneText;
  node["choiceLabels"] = n.choiceLabels;
  j["node"] = std::move(node);
  j["branching"] = s.tree().branching();
  j["remainingDepth"] = s.remaining_depth();
  j["ended"] = s.ended();
  Json peeks = Json::array();
  for (bool used : s.peeks_used()) peeks.push_back(used);
  j["peeksUsed"] = std::move(peeks);
  Json visions = Json::array();
  for (const Vision& v : s.visions()) visions.push_back(vision_to_json(v));
  j["visions"] = std::move(visions);
  j["history"] = s.history();
  return j;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ModeMismatch: return 400;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::IllegalMove:
    case ErrorCode::PeekBudgetExhausted:
    case ErrorCode::StoryEnded:
    case ErrorCode::RevisionConflict: return 409;
    case ErrorCode::Capacity: return 413;
    case ErrorCode::PlacementFailure: return 422;
  }
  return 500;
}

struct SessionService::Slot {
  std::mutex mutex;
  std::string id;
  SessionMode mode = SessionMode::Tombs;
  std::string levelId;
  Json origin;  // level spec (TOMBS) or story params (STORY)
  std::uint64_t revision = 0;
  std::string createdAt;
  std::string lastActionAt;
  Json actions = Json::array();
  std::optional<SessionState> state;
};

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  std::random_device rd;
  idSalt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
            static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
  std::filesystem::create_directories(config_.store / "levels");
  std::filesystem::create_directories(config_.store / "sessions");
}

SessionService::~SessionService() = default;

std::string SessionService::new_id() {
  std::lock_guard lock(mutex_);
  SplitMix64 mix(idSalt_ + (++idCounter_) * 0x9E3779B97F4A7C15ULL);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(mix.next()));
  return buf;
}

SessionService::LevelEntry SessionService::find_level(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = levels_.find(id); it != levels_.end()) return it->second;
  }
  if (!is_token(id)) fail(ErrorCode::NotFound, "unknown level " + id);
  auto doc = read_json_file(config_.store / "levels" / (id + ".json"));
  if (!doc) fail(ErrorCode::NotFound, "unknown level " + id);
  LevelEntry entry{std::make_shared<const LevelSpec>(level_from_json(doc->at("spec"))), *doc};
  std::lock_guard lock(mutex_);
  return levels_.emplace(id, std::move(entry)).first->second;
}

LevelSpec level_from_request(const Json& body, const AnalysisOptions& options) {
  if (!body.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
  LevelSpec spec;
  if (body.contains("spec")) {
    spec = level_from_json(body.at("spec"));
  } else {
    const GenParams base = params_from_json(body.value("base", Json::object()));
    std::vector<Lever> levers;
    if (body.contains("levers")) {
      for (const Json& l : body.at("levers")) levers.push_back(lever_from_json(l));
    } else if (body.contains("leverPlan")) {
      const Json& lp = body.at("leverPlan");
      LeverPlan plan;
      try {
        plan.ircLevers = lp.value("irc", 0);
        plan.noiLevers = lp.value("noi", 0);
        if (lp.contains("ircDelta")) plan.ircDelta = Chance::from_double(lp.at("ircDelta").get<double>()).micros();
        plan.noiDelta = lp.value("noiDelta", plan.noiDelta);
      } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::InvalidArgument, "leverPlan fields have the wrong type");
      }
      levers = place_levers(base, plan);
    }
    std::optional<Cell> start;
    if (body.contains("start") && !body.at("start").is_null()) start = cell_from_json(body.at("start"));
    PlacementTargets targets;
    if (body.contains("targets")) {
      const Json& t = body.at("targets");
      targets.minFlipsAtLeast = t.value("minFlipsAtLeast", 0);
      targets.treasureCount = t.value("treasureCount", 0);
    }
    spec = place_objectives(base, std::move(levers), start, targets, options);
  }
  return spec;
}

Json SessionService::create_level(const Json& body) {
  const LevelSpec spec = level_from_request(body, config_.analysis);
  const AnalysisReport report = analyze(spec, config_.analysis);
  const std::string id = new_id();
  Json doc;
  doc["levelId"] = id;
  doc["spec"] = level_to_json(spec);
  doc["report"] = report_to_json(report);
  write_atomically(config_.store / "levels" / (id + ".json"), dump(doc));
  std::lock_guard lock(mutex_);
  levels_.emplace(id, LevelEntry{std::make_shared<const LevelSpec>(spec), doc});
  return doc;
}

Json SessionService::get_level(const std::string& id) { return find_level(id).document; }

void SessionService::persist_session(const Slot& slot) {
  Json doc;
  doc["sessionId"] = slot.id;
  doc["mode"] = std::string(mode_name(slot.mode));
  if (slot.mode == SessionMode::Tombs) {
    doc["levelId"] = slot.levelId;
    doc["level"] = slot.origin;
  } else {
    doc["storyParams"] = slot.origin;
  }
  doc["revision"] = slot.revision;
  doc["createdAt"] = slot.createdAt;
  doc["lastActionAt"] = slot.lastActionAt;
  doc["actions"] = slot.actions;
  write_atomically(config_.store / "sessions" / (slot.id + ".json"), dump(doc));
}

std::shared_ptr<SessionService::Slot> SessionService::find_session(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  }
  if (!is_token(id)) fail(ErrorCode::NotFound, "unknown session " + id);
  auto doc = read_json_file(config_.store / "sessions" / (id + ".json"));
  if (!doc) fail(ErrorCode::NotFound, "unknown session " + id);
  auto slot = std::make_shared<Slot>();
  slot->id = id;
  slot->mode = parse_mode(doc->at("mode").get<std::string>());
  slot->levelId = doc->value("levelId", std::string());
  slot->origin = doc->at(slot->mode == SessionMode::Tombs ? "level" : "storyParams");
  slot->revision = doc->value("revision", std::uint64_t{0});
  slot->createdAt = doc->value("createdAt", std::string());
  slot->lastActionAt = doc->value("lastActionAt", std::string());
  slot->actions = doc->value("actions", Json::array());
  slot->state = replay_transcript(*doc);
  std::lock_guard lock(mutex_);
  return sessions_.emplace(id, std::move(slot)).first->second;
}

namespace {

Json session_view(const std::string& id, const std::string& levelId, std::uint64_t revision,
                  const SessionState& state) {
  Json view;
  view["sessionId"] = id;
  view["revision"] = revision;
  if (const auto* game = std::get_if<GameState>(&state)) {
    view["levelId"] = levelId;
    view.update(tombs_view(*game));
  } else {
    view.update(story_view(std::get<StorySession>(state)));
  }
  return view;
}

}  // namespace

Json SessionService::create_session(const Json& body) {
  if (!body.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
  auto slot = std::make_shared<Slot>();
  slot->mode = parse_mode(field<std::string>(body, "mode"));
  if (slot->mode == SessionMode::Tombs) {
    slot->levelId = field<std::string>(body, "levelId");
    slot->origin = level_to_json(*find_level(slot->levelId).spec);
  } else {
    slot->origin = story_params_to_json(story_params_from_json(body.value("storyParams", Json::object())));
  }
  slot->state = initial_state(slot->mode, slot->origin);
  slot->id = new_id();
  slot->createdAt = slot->lastActionAt = now_iso8601();
  persist_session(*slot);
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(slot->id, slot);
  }
  std::lock_guard lock(slot->mutex);
  return session_view(slot->id, slot->levelId, slot->revision, *slot->state);
}

Json SessionService::get_session(const std::string& id) {
  auto slot = find_session(id);
  std::lock_guard lock(slot->mutex);
  return session_view(slot->id, slot->levelId, slot->revision, *slot->state);
}

Json SessionService::mutate(const std::string& id, const Json& action,
                            std::optional<std::uint64_t> expectedRevision) {
  auto slot = find_session(id);
  std::unique_lock lock(slot->mutex, std::try_to_lock);
  if (!lock.owns_lock()) fail(ErrorCode::RevisionConflict, "another action on this session is in progress");
  if (expectedRevision && *expectedRevision != slot->revision) {
    fail(ErrorCode::RevisionConflict, "stale revision " + std::to_string(*expectedRevision) +
                                          "; current is " + std::to_string(slot->revision));
  }
  const auto op = field<std::string>(action, "op");
  const bool tombs = slot->mode == SessionMode::Tombs;
  if ((tombs && is_story_op(op)) || (!tombs && is_tombs_op(op))) {
    fail(ErrorCode::ModeMismatch, "action \"" + op + "\" does not apply to a " +
                                      std::string(mode_name(slot->mode)) + " session");
  }
  SessionState next = *slot->state;
  apply_action(next, action);
  slot->state = std::move(next);
  ++slot->revision;
  slot->actions.push_back(action);
  slot->lastActionAt = now_iso8601();
  persist_session(*slot);
  Json view = session_view(slot->id, slot->levelId, slot->revision, *slot->state);
  if (op == "peek") view["vision"] = vision_to_json(std::get<StorySession>(*slot->state).visions().back());
  return view;
}

Json SessionService::preview(const std::string& id, int lever) {
  auto slot = find_session(id);
  std::lock_guard lock(slot->mutex);
  const auto* game = std::get_if<GameState>(&*slot->state);
  if (!game) fail(ErrorCode::ModeMismatch, "preview is only available in TOMBS mode");
  if (!game->spec().previewEnabled) fail(ErrorCode::InvalidArgument, "previews are disabled for this level");
  Json cells = Json::array();
  for (Cell c : preview_diff(*game, lever)) cells.push_back(cell_to_json(c));
  Json j;
  j["sessionId"] = slot->id;
  j["revision"] = slot->revision;
  j["lever"] = lever;
  j["cells"] = std::move(cells);
  return j;
}

Json SessionService::transcript(const std::string& id) {
  auto slot = find_session(id);
  std::lock_guard lock(slot->mutex);
  Json j;
  j["sessionId"] = slot->id;
  j["mode"] = std::string(mode_name(slot->mode));
  if (slot->mode == SessionMode::Tombs) {
    j["levelId"] = slot->levelId;
    j["level"] = slot->origin;
  } else {
    j["storyParams"] = slot->origin;
    j["log"] = std::get<StorySession>(*slot->state).log();
  }
  j["actions"] = slot->actions;
  return j;
}

HttpResult SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    auto parse_body = [&]() -> Json {
      if (body.empty()) return Json::object();
      Json j = parse_json(body);
      if (!j.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
      return j;
    };
    auto revision_of = [](const Json& j) -> std::optional<std::uint64_t> {
      if (!j.contains("revision")) return std::nullopt;
      return field<std::uint64_t>(j, "revision");
    };
    const bool get = method == "GET";
    const bool post = method == "POST";

    if (parts.size() == 1 && parts[0] == "levels" && post) return {201, create_level(parse_body())};
    if (parts.size() == 2 && parts[0] == "levels" && get) return {200, get_level(std::string(parts[1]))};
    if (parts.size() == 1 && parts[0] == "sessions" && post) return {201, create_session(parse_body())};
    if (!parts.empty() && parts[0] == "sessions" && parts.size() >= 2) {
      const std::string id(parts[1]);
      if (parts.size() == 2 && get) return {200, get_session(id)};
      if (parts.size() == 3 && parts[2] == "transcript" && get) return {200, transcript(id)};
      if (parts.size() == 4 && parts[2] == "preview" && get) return {200, preview(id, parse_int(parts[3]))};
      if (parts.size() == 3 && post) {
        const Json req = parse_body();
        Json action;
        if (parts[2] == "move") {
          action["op"] = "move";
          action["arg"] = field<std::string>(req, "dir");
        } else if (parts[2] == "flip") {
          action["op"] = "flip";
          action["arg"] = field<int>(req, "lever");
        } else if (parts[2] == "peek") {
          action["op"] = "peek";
          action["choice"] = field<int>(req, "choice");
          action["d"] = field<int>(req, "d");
        } else if (parts[2] == "choose") {
          action["op"] = "choose";
          action["choice"] = field<int>(req, "choice");
        } else {
          fail(ErrorCode::NotFound, "no such endpoint");
        }
        return {200, mutate(id, action, revision_of(req))};
      }
    }
    fail(ErrorCode::NotFound, "no such endpoint: " + std::string(method) + " " + std::string(path));
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what())};
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "internal";
    j["message"] = e.what();
    return {500, j};
  }
}

void bind_routes(httplib::Server& server, SessionService& service,
                 const std::optional<std::filesystem::path>& staticDir) {
  if (staticDir) server.set_mount_point("/", staticDir->string());
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const HttpResult r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
}

}  // namespace tomeria
