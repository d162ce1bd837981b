#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tomeria/level_io.hpp"
#include "tomeria/lever_world.hpp"

namespace tomeria {

struct AnalysisOptions {
  /// Enumeration is refused above this many levers (2^L grids are built).
  std::size_t maxLevers = 16;
  Exec exec = Exec::Parallel;
};

/// All 2^L realized grids of a level, indexed by config mask.
struct ConfigTable {
  std::size_t leverCount = 0;
  std::vector<Grid> grids;

  const Grid& at(std::uint32_t mask) const { return grids.at(mask); }
  const Grid& at(const LeverConfig& config) const { return grids.at(config.mask()); }
};

/// The 4-connected OPEN component containing `from`, row-major sorted.
/// invalid-argument if `from` is BLOCK or out of bounds.
std::vector<Cell> reachable_cells(const Grid& grid, Cell from);

/// Builds every config's grid from one shared random field. Configs with the
/// same effective parameters share a single generation pass.
ConfigTable enumerate_configs(const LevelSpec& spec, const AnalysisOptions& options = {});

/// Player position collapsed to its component, identified by the component's
/// smallest row-major cell.
struct StateNode {
  LeverConfig config;
  Cell component{};

  friend bool operator==(const StateNode&, const StateNode&) = default;
};

struct StateEdge {
  std::size_t from = 0;
  int lever = 0;
  std::size_t to = 0;
};

/// Nodes are in breadth-first discovery order from the root, so depth[i] is
/// the minimum number of flips needed to reach node i.
struct StateGraph {
  std::vector<StateNode> nodes;
  std::vector<StateEdge> edges;
  std::vector<int> depth;
  std::size_t root = 0;
};

StateGraph build_state_graph(const LevelSpec& spec, const AnalysisOptions& options = {});
StateGraph build_state_graph(const LevelSpec& spec, const ConfigTable& table,
                             const AnalysisOptions& options = {});

struct ScriptStep {
  enum class Op { Move, Flip };
  Op op = Op::Move;
  Direction direction = Direction::North;  // Move
  int lever = 0;                           // Flip

  friend bool operator==(const ScriptStep&, const ScriptStep&) = default;
};

struct TreasureStatus {
  Cell cell{};
  bool reachable = false;

  friend bool operator==(const TreasureStatus&, const TreasureStatus&) = default;
};

struct AnalysisReport {
  bool solvable = false;
  std::optional<int> minFlips;
  std::vector<Cell> explorableCells;  // row-major sorted
  /// |explorable| / |cells OPEN in at least one reachable config|.
  double explorableFraction = 0.0;
  /// |explorable| / grid area.
  double explorableAreaFraction = 0.0;
  std::size_t reachableConfigs = 0;
  std::vector<TreasureStatus> treasures;
  /// Lexicographically smallest minimum-length lever sequence reaching the exit.
  std::vector<int> solutionFlips;
  std::optional<std::vector<ScriptStep>> solutionPath;
};

/// Exhaustive analysis over the state graph.
AnalysisReport analyze(const LevelSpec& spec, const AnalysisOptions& options = {});

/// Independent check: breadth-first search over (config, player cell) with
/// single-cell moves and flips underfoot. Slow; small levels only.
AnalysisReport brute_force_oracle(const LevelSpec& spec);

/// Expands a lever sequence into a move/flip script: shortest walks (ties by
/// N,S,E,W order) to each lever, the flip, and finally the walk to the exit.
/// Throws invalid-argument if some target is unreachable.
std::vector<ScriptStep> solution_script(const LevelSpec& spec, std::span<const int> flips);

/// Component size the player can roam after each prefix of `flips` applied
/// along the script (element 0 is the starting component).
std::vector<std::size_t> component_sizes_along(const LevelSpec& spec, std::span<const int> flips);

Json report_to_json(const AnalysisReport& report);
Json script_to_json(std::span<const ScriptStep> script);
std::vector<ScriptStep> script_from_json(const Json& j);

}  // namespace tomeria
