#include "tomeria/level_io.hpp"

#include <algorithm>

#include "tomeria/error.hpp"

namespace tomeria {

namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

[[noreturn]] void rethrow_as_invalid(const std::exception& e) {
  fail(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
}

}  // namespace

Json cell_to_json(Cell c) { return Json::array({c.x, c.y}); }

Cell cell_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::InvalidArgument, "cell must be [x,y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

Json params_to_json(const GenParams& p) {
  Json j;
  j["seed"] = p.seed;
  j["width"] = p.width;
  j["height"] = p.height;
  j["irc"] = p.irc.value();
  j["noi"] = p.noi;
  j["blockThreshold"] = p.rule.blockThreshold;
  return j;
}

GenParams params_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "generator params must be an object");
  GenParams p;
  try {
    p.seed = get_or<std::uint64_t>(j, "seed", p.seed);
    p.width = get_or<int>(j, "width", p.width);
    p.height = get_or<int>(j, "height", p.height);
    if (j.contains("irc")) p.irc = Chance::from_double(j.at("irc").get<double>());
    p.noi = get_or<int>(j, "noi", p.noi);
    p.rule.blockThreshold = get_or<int>(j, "blockThreshold", p.rule.blockThreshold);
  } catch (const nlohmann::json::exception& e) {
    rethrow_as_invalid(e);
  }
  p.validate();
  return p;
}

Json lever_to_json(const Lever& l) {
  Json j;
  j["id"] = l.id;
  j["cell"] = cell_to_json(l.cell);
  j["axis"] = std::string(axis_name(l.axis));
  if (l.axis == LeverAxis::Irc) {
    j["delta"] = static_cast<double>(l.delta) / static_cast<double>(Chance::kScale);
  } else {
    j["delta"] = l.delta;
  }
  return j;
}

Lever lever_from_json(const Json& j) {
  Lever l;
  try {
    l.id = j.at("id").get<int>();
    l.cell = cell_from_json(j.at("cell"));
    l.axis = parse_axis(j.at("axis").get<std::string>());
    if (l.axis == LeverAxis::Irc) {
      l.delta = Chance::from_double(j.at("delta").get<double>()).micros();
    } else {
      const double d = j.at("delta").get<double>();
      if (d != static_cast<double>(static_cast<std::int64_t>(d))) {
        fail(ErrorCode::InvalidArgument, "NOI lever delta must be an integer");
      }
      l.delta = static_cast<std::int64_t>(d);
    }
  } catch (const nlohmann::json::exception& e) {
    rethrow_as_invalid(e);
  }
  return l;
}

Json level_to_json(const LevelSpec& spec) {
  Json j;
  j["base"] = params_to_json(spec.base);
  Json levers = Json::array();
  for (const Lever& l : spec.levers) levers.push_back(lever_to_json(l));
  j["levers"] = std::move(levers);
  j["start"] = cell_to_json(spec.start);
  j["exit"] = cell_to_json(spec.exit);
  Json treasures = Json::array();
  for (Cell t : spec.treasures) treasures.push_back(cell_to_json(t));
  j["treasures"] = std::move(treasures);
  j["initialConfig"] = spec.initialConfig.to_string();
  if (!spec.previewEnabled) j["preview"] = false;
  return j;
}

LevelSpec level_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "level spec must be an object");
  LevelSpec spec;
  try {
    spec.base = params_from_json(j.at("base"));
    for (const Json& l : j.value("levers", Json::array())) spec.levers.push_back(lever_from_json(l));
    spec.start = cell_from_json(j.at("start"));
    spec.exit = cell_from_json(j.at("exit"));
    for (const Json& t : j.value("treasures", Json::array())) spec.treasures.push_back(cell_from_json(t));
    std::sort(spec.treasures.begin(), spec.treasures.end());
    if (j.contains("initialConfig")) {
      spec.initialConfig = LeverConfig::from_string(j.at("initialConfig").get<std::string>());
    } else {
      spec.initialConfig = LeverConfig(spec.levers.size());
    }
    spec.previewEnabled = j.value("preview", true);
  } catch (const nlohmann::json::exception& e) {
    rethrow_as_invalid(e);
  }
  spec.validate();
  return spec;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    rethrow_as_invalid(e);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tomeria
