#include "tomeria/golden.hpp"

#include <fstream>
#include <sstream>

#include "tomeria/analyzer.hpp"
#include "tomeria/session_service.hpp"
#include "tomeria/story.hpp"

namespace tomeria {

Json golden_level_request() {
  return parse_json(R"({
    "base": {"seed": 12, "width": 32, "height": 24, "irc": 0.45, "noi": 3, "blockThreshold": 5},
    "leverPlan": {"irc": 2, "noi": 2, "ircDelta": -0.005, "noiDelta": 1},
    "targets": {"minFlipsAtLeast": 3, "treasureCount": 3}
  })");
}

namespace {

LevelSpec golden_level() {
  AnalysisOptions serial;
  serial.exec = Exec::Serial;
  return level_from_request(golden_level_request(), serial);
}

Json golden_walkthrough() {
  const LevelSpec spec = golden_level();
  const AnalysisReport report = analyze(spec);
  Json t;
  t["mode"] = "TOMBS";
  t["level"] = level_to_json(spec);
  t["actions"] = report.solutionPath ? script_to_json(*report.solutionPath) : Json::array();
  return t;
}

std::string grid_golden() {
  GenParams p;
  p.seed = 1;
  p.width = 8;
  p.height = 8;
  p.irc = Chance::from_micros(450'000);
  p.noi = 2;
  p.rule.blockThreshold = 5;
  return to_text(generate(p), p);
}

std::string walkthrough_final() {
  const SessionState state = replay_transcript(golden_walkthrough());
  const GameState& g = std::get<GameState>(state);
  std::ostringstream os;
  os << "config=" << g.config().to_string() << " player=" << g.player().x << ',' << g.player().y
     << " flipCount=" << g.flip_count() << " collected=" << g.collected().size()
     << " complete=" << (g.complete() ? "true" : "false") << '\n';
  os << annotated_rows(g.spec(), g.grid());
  return os.str();
}

std::string story_sim() {
  StoryParams p;
  p.seed = 9;
  p.branching = 2;
  p.depth = 4;
  p.sessionSeed = 9;
  return dump(simulate_story(p, kGoldenStoryScript));
}

std::string read_file(const std::filesystem::path& p, bool& ok) {
  std::ifstream in(p, std::ios::binary);
  ok = static_cast<bool>(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<GoldenArtifact> golden_artifacts() {
  return {
      {"grid_seed1_8x8.txt", grid_golden},
      {"story_seed9_b2_D4.json", [] { return dump(story_to_json(generate_story_tree(9, 2, 4))); }},
      {"level_request.json", [] { return dump(golden_level_request()); }},
      {"level_spec.json", [] { return dump(level_to_json(golden_level())); }},
      {"level_report.json", [] { return dump(report_to_json(analyze(golden_level()))); }},
      {"walkthrough_transcript.json", [] { return dump(golden_walkthrough()); }},
      {"walkthrough_final.txt", walkthrough_final},
      {"story_sim_seed9.json", story_sim},
  };
}

std::vector<GoldenCheck> verify_golden(const std::filesystem::path& dir, bool update) {
  std::vector<GoldenCheck> checks;
  for (const GoldenArtifact& a : golden_artifacts()) {
    GoldenCheck c{a.name, false, {}};
    const std::string produced = a.produce();
    const auto path = dir / a.name;
    if (update) {
      std::filesystem::create_directories(dir);
      std::ofstream(path, std::ios::binary | std::ios::trunc) << produced;
      c.ok = true;
      c.detail = "written";
    } else {
      bool exists = false;
      const std::string expected = read_file(path, exists);
      if (!exists) {
        c.detail = "missing " + path.string();
      } else if (expected != produced) {
        c.detail = "differs from " + path.string();
      } else {
        c.ok = true;
        c.detail = "identical";
      }
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

}  // namespace tomeria
