#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tomeria/analyzer.hpp"

namespace tomeria {

struct PlacementTargets {
  int minFlipsAtLeast = 0;
  int treasureCount = 0;
};

/// Automatic lever layout: IRC levers get ids first, then NOI levers.
struct LeverPlan {
  int ircLevers = 0;
  int noiLevers = 0;
  std::int64_t ircDelta = Lever::kDefaultIrcDelta;  // millionths
  std::int64_t noiDelta = Lever::kDefaultNoiDelta;
};

/// Scatters the planned levers over distinct OPEN cells of the base grid,
/// chosen by a SplitMix64 stream derived from base.seed.
std::vector<Lever> place_levers(const GenParams& base, const LeverPlan& plan);

/// Picks start (when not given), exit and treasures so that the level is
/// solvable with at least `minFlipsAtLeast` flips.
///
/// start: smallest row-major cell of the largest component of the initial
/// grid. exit: the explorable cell with the highest minimum flip count; ties
/// go to the cell farther (shortest walk) from where the player first enters
/// its component, then to the smaller row-major index. Because carving the
/// exit can open shortcuts, each candidate is re-analyzed, and at most
/// `kMaxExitAttempts` candidates are tried. treasures: explorable cells outside
/// the starting component first, topped up from the starting component.
///
/// Throws placement-failure when the targets cannot be met.
LevelSpec place_objectives(const GenParams& base, std::vector<Lever> levers,
                           std::optional<Cell> start, const PlacementTargets& targets,
                           const AnalysisOptions& options = {});

inline constexpr int kMaxExitAttempts = 32;

struct Design {
  LevelSpec spec;
  AnalysisReport report;
};

/// True when the solution's first `flips` flips each strictly enlarge the
/// component the player can roam.
bool opens_up_along_solution(const LevelSpec& spec, const AnalysisReport& report, int flips);

/// Extra acceptance test applied to each successfully placed level.
using DesignFilter = std::function<bool(const Design&)>;

/// Tries seeds first..last (inclusive) in order and returns the first seed's
/// design that places successfully and passes `filter`. Seeds are evaluated in
/// parallel batches; the result is always the lowest qualifying seed.
std::optional<Design> design_scan(const GenParams& base, const LeverPlan& plan,
                                  const PlacementTargets& targets, std::uint64_t firstSeed,
                                  std::uint64_t lastSeed, const AnalysisOptions& options = {},
                                  const DesignFilter& filter = {});

/// Every qualifying design in the seed range, in seed order.
std::vector<Design> design_all(const GenParams& base, const LeverPlan& plan,
                               const PlacementTargets& targets, std::uint64_t firstSeed,
                               std::uint64_t lastSeed, const AnalysisOptions& options = {},
                               const DesignFilter& filter = {});

}  // namespace tomeria
