#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tomeria/analyzer.hpp"
#include "tomeria/error.hpp"
#include "tomeria/golden.hpp"
#include "tomeria/placement.hpp"
#include "tomeria/session_service.hpp"
#include "tomeria/story.hpp"
#include "tomeria/sweep.hpp"

#ifndef TOMERIA_GOLDEN_DIR
#define TOMERIA_GOLDEN_DIR "tests/golden"
#endif

namespace tomeria::cli {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Usage(std::string("bad ") + what + ": \"" + std::string(text) + "\"");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto at = text.find(sep);
    parts.push_back(text.substr(0, at));
    if (at == std::string_view::npos) return parts;
    text.remove_prefix(at + sep.size());
  }
}

void parse_size(const std::string& size, GenParams& p) {
  const auto parts = split(size, "x");
  if (parts.size() != 2) throw Usage("--size must look like 64x48");
  p.width = parse_number<int>(parts[0], "width");
  p.height = parse_number<int>(parts[1], "height");
}

Chance chance_flag(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw Usage(std::string(what) + " must lie in [0,1]");
  return Chance::from_double(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& outPath, std::ostream& out) {
  if (outPath.empty()) {
    out << text;
    return;
  }
  std::ofstream file(outPath, std::ios::binary | std::ios::trunc);
  if (!file) throw Usage("cannot write " + outPath);
  file << text;
}

struct BaseFlags {
  std::uint64_t seed = 1;
  std::string size = "64x48";
  double irc = 0.45;
  int noi = 3;
  int threshold = 5;

  void add(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Generator seed");
    cmd->add_option("--size", size, "Grid size WxH");
    cmd->add_option("--irc", irc, "Initial random chance of BLOCK, in [0,1]");
    cmd->add_option("--noi", noi, "Number of CA iterations");
    cmd->add_option("--threshold", threshold, "BLOCK neighbour threshold (3x3, self included)");
  }

  GenParams params() const {
    GenParams p;
    p.seed = seed;
    parse_size(size, p);
    p.irc = chance_flag(irc, "--irc");
    p.noi = noi;
    p.rule.blockThreshold = threshold;
    p.validate();
    return p;
  }
};

LevelSpec read_spec(const std::string& path) {
  const Json doc = parse_json(read_file(path));
  return level_from_json(doc.contains("spec") ? doc.at("spec") : doc);
}

void pretty_report(const LevelSpec& spec, const AnalysisReport& r, std::ostream& out) {
  out << "solvable           " << (r.solvable ? "yes" : "no") << '\n';
  out << "min flips          " << (r.minFlips ? std::to_string(*r.minFlips) : "-") << '\n';
  out << "reachable configs  " << r.reachableConfigs << " of " << (std::size_t{1} << spec.levers.size())
      << '\n';
  out << "explorable cells   " << r.explorableCells.size() << " (" << r.explorableFraction * 100.0
      << "% of ever-open cells)\n";
  for (const auto& t : r.treasures) {
    out << "treasure " << t.cell.x << ',' << t.cell.y << "     " << (t.reachable ? "reachable" : "unreachable")
        << '\n';
  }
  if (!r.solutionFlips.empty()) {
    out << "flip order        ";
    for (int l : r.solutionFlips) out << ' ' << l;
    out << '\n';
  }
  out << '\n' << annotated_rows(spec, realize(spec, spec.initialConfig));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cellular-automata tomb generator, solvability analyzer and story simulator", "tomeria"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tomeria 1.0.0");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate one grid in the text grid format");
  BaseFlags genBase;
  std::string genOut;
  genBase.add(gen);
  gen->add_option("--out", genOut, "Write to this file instead of stdout");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Exhaustive solvability report for a level spec");
  std::string anaPath;
  bool anaOracle = false;
  bool anaPretty = false;
  std::size_t anaMaxLevers = AnalysisOptions{}.maxLevers;
  ana->add_option("spec", anaPath, "Level spec JSON (or a level document with a \"spec\" field)")
      ->required();
  ana->add_flag("--oracle", anaOracle, "Use the brute-force cell-level search instead");
  ana->add_flag("--pretty", anaPretty, "Human-readable summary");
  ana->add_option("--max-levers", anaMaxLevers, "Refuse to enumerate above this many levers");

  // design
  auto* des = app.add_subcommand("design", "Scan seeds for the first level meeting the targets");
  BaseFlags desBase;
  std::string desSeeds = "1..200";
  LeverPlan plan;
  double ircDelta = 0.005;
  PlacementTargets targets;
  int opensUp = 0;
  bool desPretty = false;
  desBase.add(des);
  des->add_option("--seeds", desSeeds, "Inclusive seed range a..b");
  des->add_option("--irc-levers", plan.ircLevers, "Levers that shift irc");
  des->add_option("--noi-levers", plan.noiLevers, "Levers that shift noi");
  des->add_option("--irc-delta", ircDelta, "irc shift of a RIGHT irc lever");
  des->add_option("--noi-delta", plan.noiDelta, "noi shift of a RIGHT noi lever");
  des->add_option("--min-flips", targets.minFlipsAtLeast, "Required minimum flips");
  des->add_option("--treasures", targets.treasureCount, "Treasures to place");
  des->add_option("--opens-up", opensUp,
                  "Also require the first N solution flips to each enlarge the roamable area");
  des->add_flag("--pretty", desPretty, "Human-readable summary");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Expressive-range metrics over an (irc, noi) grid as CSV");
  BaseFlags swpBase;
  std::string ircRange = "0:1:0.05";
  std::string noiRange = "0:5";
  int seedsPerCell = 20;
  std::string swpOut;
  bool swpSerial = false;
  swpBase.add(swp);
  swp->add_option("--irc-range", ircRange, "first:last:step over irc, inclusive");
  swp->add_option("--noi-range", noiRange, "first:last[:step] over noi, inclusive");
  swp->add_option("--seeds-per-cell", seedsPerCell, "Seeds averaged per cell, starting at --seed");
  swp->add_option("--out", swpOut, "Write CSV to this file instead of stdout");
  swp->add_flag("--serial", swpSerial, "Disable the parallel kernels");

  // story
  auto* sto = app.add_subcommand("story", "Branching-story tools");
  sto->require_subcommand(1);
  StoryParams storyParams;
  std::string script;
  bool stoPretty = false;
  auto* sim = sto->add_subcommand("sim", "Play a scripted story and print its log");
  sim->add_option("--seed", storyParams.seed, "Story tree seed");
  sim->add_option("--b", storyParams.branching, "Choices per decision");
  sim->add_option("--D", storyParams.depth, "Decisions until the end");
  auto* sessionSeedOpt = sim->add_option("--session-seed", storyParams.sessionSeed, "Vision sampling seed");
  sim->add_option("--script", script, "Actions: peek:<choice>:<d>,choose:<choice>,...");
  sim->add_flag("--pretty", stoPretty, "Print only the log lines");
  auto* hit = sto->add_subcommand("hit-rate", "Monte-Carlo rate at which a vision comes true");
  int hitB = 2;
  int hitD = 4;
  std::uint64_t trials = 100000;
  std::uint64_t hitSeed = 1;
  hit->add_option("--b", hitB, "Choices per decision");
  hit->add_option("--d", hitD, "Vision depth");
  hit->add_option("--trials", trials, "Monte-Carlo trials");
  hit->add_option("--seed", hitSeed, "Sampling seed");

  // verify-golden
  auto* gold = app.add_subcommand("verify-golden", "Regenerate golden files and compare byte-for-byte");
  std::string goldDir = TOMERIA_GOLDEN_DIR;
  bool goldUpdate = false;
  gold->add_option("--dir", goldDir, "Golden file directory");
  gold->add_flag("--update", goldUpdate, "Rewrite the files instead of comparing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      const GenParams p = genBase.params();
      emit(to_text(generate(p, Exec::Parallel), p), genOut, out);
      return kOk;
    }

    if (ana->parsed()) {
      const LevelSpec spec = read_spec(anaPath);
      AnalysisOptions options;
      options.maxLevers = anaMaxLevers;
      if (spec.levers.size() > options.maxLevers) {
        fail(ErrorCode::Capacity, "level has more levers than --max-levers");
      }
      const AnalysisReport report = anaOracle ? brute_force_oracle(spec) : analyze(spec, options);
      if (anaPretty) {
        pretty_report(spec, report, out);
      } else {
        out << dump(report_to_json(report));
      }
      return kOk;
    }

    if (des->parsed()) {
      const GenParams base = desBase.params();
      const auto range = split(desSeeds, "..");
      if (range.size() != 2) throw Usage("--seeds must look like 1..200");
      const auto first = parse_number<std::uint64_t>(range[0], "seed");
      const auto last = parse_number<std::uint64_t>(range[1], "seed");
      if (!(std::abs(ircDelta) <= 1.0)) throw Usage("--irc-delta must lie in [-1,1]");
      plan.ircDelta = Chance::from_double(std::abs(ircDelta)).micros() * (ircDelta < 0 ? -1 : 1);
      DesignFilter filter;
      if (opensUp > 0) {
        filter = [opensUp](const Design& d) { return opens_up_along_solution(d.spec, d.report, opensUp); };
      }
      const auto design = design_scan(base, plan, targets, first, last, {}, filter);
      if (!design) {
        err << "no seed in " << desSeeds << " satisfies the targets\n";
        return kUnsatisfied;
      }
      if (desPretty) {
        out << "seed " << design->spec.base.seed << "\n";
        pretty_report(design->spec, design->report, out);
      } else {
        Json doc;
        doc["seed"] = design->spec.base.seed;
        doc["spec"] = level_to_json(design->spec);
        doc["report"] = report_to_json(design->report);
        out << dump(doc);
      }
      return kOk;
    }

    if (swp->parsed()) {
      const GenParams base = swpBase.params();
      const auto ir = split(ircRange, ":");
      if (ir.size() != 3) throw Usage("--irc-range must look like first:last:step");
      const auto irc = chance_range(chance_flag(parse_number<double>(ir[0], "irc"), "--irc-range"),
                                    chance_flag(parse_number<double>(ir[1], "irc"), "--irc-range"),
                                    chance_flag(parse_number<double>(ir[2], "irc step"), "--irc-range"));
      const auto nr = split(noiRange, ":");
      if (nr.size() != 2 && nr.size() != 3) throw Usage("--noi-range must look like first:last[:step]");
      const auto noi = int_range(parse_number<int>(nr[0], "noi"), parse_number<int>(nr[1], "noi"),
                                 nr.size() == 3 ? parse_number<int>(nr[2], "noi step") : 1);
      if (seedsPerCell < 1) throw Usage("--seeds-per-cell must be positive");
      const auto rows = expressive_sweep(base, irc, noi, seedsPerCell, swpSerial ? Exec::Serial : Exec::Parallel);
      emit(sweep_to_csv(rows), swpOut, out);
      return kOk;
    }

    if (sim->parsed()) {
      if (sessionSeedOpt->count() == 0) storyParams.sessionSeed = storyParams.seed;
      const Json result = simulate_story(storyParams, script);
      if (stoPretty) {
        for (const auto& line : result.at("log")) out << line.get<std::string>() << '\n';
      } else {
        out << dump(result);
      }
      return kOk;
    }

    if (hit->parsed()) {
      if (trials == 0) throw Usage("--trials must be positive");
      Json doc;
      doc["b"] = hitB;
      doc["d"] = hitD;
      doc["trials"] = trials;
      doc["hitRate"] = vision_hit_rate(hitB, hitD, trials, hitSeed);
      doc["expected"] = 1.0 / static_cast<double>(futures_count(hitB, hitD));
      out << dump(doc);
      return kOk;
    }

    if (gold->parsed()) {
      Json doc = Json::array();
      bool ok = true;
      for (const GoldenCheck& c : verify_golden(goldDir, goldUpdate)) {
        doc.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
        ok = ok && c.ok;
      }
      out << dump(doc);
      return ok ? kOk : kUnsatisfied;
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::PlacementFailure ? kUnsatisfied : kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tomeria::cli
