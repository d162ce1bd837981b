#include "tomeria/placement.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "tomeria/error.hpp"
#include "tomeria/rng.hpp"

namespace tomeria {

namespace {

constexpr std::uint64_t kLeverStream = 0x4C45564552ULL;     // "LEVER"
constexpr std::uint64_t kTreasureStream = 0x5452454153ULL;  // "TREAS"

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.next_below(i)]);
  }
}

std::vector<int> walk_distances(const Grid& grid, Cell from) {
  std::vector<int> dist(grid.size(), -1);
  std::deque<Cell> queue{from};
  dist[grid.index_of(from)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West}) {
      const Cell n = step(c, d);
      if (!grid.is_open(n) || dist[grid.index_of(n)] >= 0) continue;
      dist[grid.index_of(n)] = dist[grid.index_of(c)] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

Cell auto_start(const LevelSpec& draft) {
  Grid grid = realize(draft, draft.initialConfig);
  // realize() carved the provisional start; undo that so it cannot bias the choice.
  const Grid raw = generate(effective_params(draft, draft.initialConfig));
  if (!draft.lever_at(draft.start)) grid.set(draft.start, raw.at(draft.start));
  const auto labels = label_components(grid);
  std::unordered_map<std::int32_t, std::size_t> sizes;
  for (auto l : labels) {
    if (l >= 0) ++sizes[l];
  }
  if (sizes.empty()) fail(ErrorCode::PlacementFailure, "initial grid has no OPEN cell");
  std::int32_t best = -1;
  std::size_t bestSize = 0;
  for (auto [label, size] : sizes) {
    if (size > bestSize || (size == bestSize && label < best)) {
      best = label;
      bestSize = size;
    }
  }
  return grid.cell_of(static_cast<std::size_t>(best));
}

}  // namespace

std::vector<Lever> place_levers(const GenParams& base, const LeverPlan& plan) {
  if (plan.ircLevers < 0 || plan.noiLevers < 0) {
    fail(ErrorCode::InvalidArgument, "lever counts must be non-negative");
  }
  const auto total = static_cast<std::size_t>(plan.ircLevers + plan.noiLevers);
  if (total > LeverConfig::kMaxLevers) fail(ErrorCode::Capacity, "too many levers");
  const Grid grid = generate(base);
  std::vector<Cell> open;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.at(i) == Tile::Open) open.push_back(grid.cell_of(i));
  }
  if (open.size() < total) fail(ErrorCode::PlacementFailure, "not enough OPEN cells for levers");
  SplitMix64 rng(derive_seed(base.seed, kLeverStream));
  std::vector<Lever> levers;
  for (std::size_t i = 0; i < total; ++i) {
    // Partial Fisher-Yates: pick from the not-yet-used tail.
    const std::size_t pick = i + rng.next_below(open.size() - i);
    std::swap(open[i], open[pick]);
    const bool irc = static_cast<int>(i) < plan.ircLevers;
    levers.push_back({static_cast<int>(i), open[i], irc ? LeverAxis::Irc : LeverAxis::Noi,
                      irc ? plan.ircDelta : plan.noiDelta});
  }
  return levers;
}

LevelSpec place_objectives(const GenParams& base, std::vector<Lever> levers,
                           std::optional<Cell> start, const PlacementTargets& targets,
                           const AnalysisOptions& options) {
  base.validate();
  if (targets.minFlipsAtLeast < 0 || targets.treasureCount < 0) {
    fail(ErrorCode::InvalidArgument, "placement targets must be non-negative");
  }
  LevelSpec draft;
  draft.base = base;
  draft.levers = std::move(levers);
  draft.initialConfig = LeverConfig(draft.levers.size());
  draft.start = start.value_or(Cell{0, 0});
  draft.exit = draft.start;
  draft.validate();
  if (draft.levers.size() > options.maxLevers) {
    fail(ErrorCode::Capacity, "too many levers for analysis");
  }
  if (!start) {
    draft.start = auto_start(draft);
    draft.exit = draft.start;
  }

  // Minimum flips to reach each cell, and the walk from where its component is entered.
  const ConfigTable table = enumerate_configs(draft, options);
  const StateGraph graph = build_state_graph(draft, table, options);
  const Grid& shape = table.grids.front();
  std::vector<int> minFlips(shape.size(), -1);
  std::vector<int> entryDistance(shape.size(), -1);
  std::vector<Cell> entry(graph.nodes.size(), draft.start);
  // The first edge (in discovery order) into a node defines where it is entered.
  std::vector<std::uint8_t> entrySet(graph.nodes.size(), 0);
  for (const StateEdge& e : graph.edges) {
    if (graph.depth[e.to] == graph.depth[e.from] + 1 && !entrySet[e.to]) {
      entry[e.to] = draft.levers[e.lever].cell;
      entrySet[e.to] = 1;
    }
  }
  for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
    const Grid& grid = table.at(graph.nodes[n].config);
    const auto dist = walk_distances(grid, entry[n]);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] < 0 || minFlips[i] >= 0) continue;
      minFlips[i] = graph.depth[n];
      entryDistance[i] = dist[i];
    }
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < minFlips.size(); ++i) {
    if (minFlips[i] < targets.minFlipsAtLeast) continue;
    if (draft.lever_at(shape.cell_of(i))) continue;
    candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (minFlips[a] != minFlips[b]) return minFlips[a] > minFlips[b];
    if (entryDistance[a] != entryDistance[b]) return entryDistance[a] > entryDistance[b];
    return a < b;
  });

  std::optional<LevelSpec> placed;
  std::optional<AnalysisReport> report;
  int attempts = 0;
  for (std::size_t i : candidates) {
    if (attempts++ == kMaxExitAttempts) break;
    LevelSpec trial = draft;
    trial.exit = shape.cell_of(i);
    AnalysisReport r = analyze(trial, options);
    if (r.solvable && *r.minFlips >= targets.minFlipsAtLeast) {
      placed = std::move(trial);
      report = std::move(r);
      break;
    }
  }
  if (!placed) {
    fail(ErrorCode::PlacementFailure,
         "no exit satisfies minFlips >= " + std::to_string(targets.minFlipsAtLeast));
  }

  if (targets.treasureCount > 0) {
    const auto rootCells = reachable_cells(realize(*placed, placed->initialConfig), placed->start);
    std::vector<Cell> beyond;
    std::vector<Cell> near;
    for (Cell c : report->explorableCells) {
      if (c == placed->start || c == placed->exit || placed->lever_at(c)) continue;
      (std::binary_search(rootCells.begin(), rootCells.end(), c) ? near : beyond).push_back(c);
    }
    SplitMix64 rng(derive_seed(base.seed, kTreasureStream));
    shuffle(beyond, rng);
    shuffle(near, rng);
    beyond.insert(beyond.end(), near.begin(), near.end());
    if (beyond.size() < static_cast<std::size_t>(targets.treasureCount)) {
      fail(ErrorCode::PlacementFailure, "not enough explorable cells for treasures");
    }
    beyond.resize(static_cast<std::size_t>(targets.treasureCount));
    std::sort(beyond.begin(), beyond.end());
    placed->treasures = std::move(beyond);
  }
  placed->validate();
  return *placed;
}

bool opens_up_along_solution(const LevelSpec& spec, const AnalysisReport& report, int flips) {
  if (!report.solvable || flips < 0 || report.solutionFlips.size() < static_cast<std::size_t>(flips)) {
    return false;
  }
  const auto sizes = component_sizes_along(spec, report.solutionFlips);
  for (int i = 0; i < flips; ++i) {
    if (sizes[static_cast<std::size_t>(i) + 1] <= sizes[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

namespace {

std::vector<Design> scan(const GenParams& base, const LeverPlan& plan, const PlacementTargets& targets,
                         std::uint64_t firstSeed, std::uint64_t lastSeed,
                         const AnalysisOptions& options, const DesignFilter& filter, bool stopAtFirst) {
  std::vector<Design> found;
  if (lastSeed < firstSeed) return found;
  AnalysisOptions inner = options;
  inner.exec = Exec::Serial;
  const std::uint64_t batch = static_cast<std::uint64_t>(std::max(1, parallel_threads())) * 2;
  for (std::uint64_t lo = firstSeed;; lo += batch) {
    const std::uint64_t hi = std::min(lastSeed, lo + batch - 1);
    std::vector<std::optional<Design>> slots(static_cast<std::size_t>(hi - lo + 1));
    for_each_index(slots.size(), options.exec, [&](std::size_t i) {
      GenParams p = base;
      p.seed = lo + i;
      try {
        LevelSpec spec = place_objectives(p, place_levers(p, plan), std::nullopt, targets, inner);
        Design d{spec, analyze(spec, inner)};
        if (!filter || filter(d)) slots[i] = std::move(d);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PlacementFailure) throw;
      }
    });
    for (auto& s : slots) {
      if (!s) continue;
      found.push_back(std::move(*s));
      if (stopAtFirst) return found;
    }
    if (hi == lastSeed) break;
  }
  return found;
}

}  // namespace

std::optional<Design> design_scan(const GenParams& base, const LeverPlan& plan,
                                  const PlacementTargets& targets, std::uint64_t firstSeed,
                                  std::uint64_t lastSeed, const AnalysisOptions& options,
                                  const DesignFilter& filter) {
  auto found = scan(base, plan, targets, firstSeed, lastSeed, options, filter, true);
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

std::vector<Design> design_all(const GenParams& base, const LeverPlan& plan,
                               const PlacementTargets& targets, std::uint64_t firstSeed,
                               std::uint64_t lastSeed, const AnalysisOptions& options,
                               const DesignFilter& filter) {
  return scan(base, plan, targets, firstSeed, lastSeed, options, filter, false);
}

}  // namespace tomeria
