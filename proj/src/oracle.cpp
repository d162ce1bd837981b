#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

#include "tomeria/analyzer.hpp"
#include "tomeria/error.hpp"

// Reference solver over primitive game actions. Shares nothing with the
// state-graph path except realize() and the script expansion.

namespace tomeria {

namespace {

class PlayerSpace {
 public:
  explicit PlayerSpace(const LevelSpec& spec)
      : spec_(spec), area_(static_cast<std::uint64_t>(spec.base.width) * spec.base.height) {}

  const Grid& grid(std::uint32_t mask) {
    auto it = grids_.find(mask);
    if (it == grids_.end()) {
      it = grids_.emplace(mask, realize(spec_, LeverConfig::from_mask(mask, spec_.levers.size()))).first;
    }
    return it->second;
  }

  std::uint64_t key(std::uint32_t mask, Cell c) const {
    return static_cast<std::uint64_t>(mask) * area_ +
           static_cast<std::uint64_t>(c.y) * spec_.base.width + c.x;
  }
  std::uint32_t mask_of(std::uint64_t k) const { return static_cast<std::uint32_t>(k / area_); }
  Cell cell_of(std::uint64_t k) const {
    const auto i = k % area_;
    return {static_cast<int>(i % spec_.base.width), static_cast<int>(i / spec_.base.width)};
  }

  // 0-1 BFS: moves cost 0, flips cost 1. Every action is its own inverse, so
  // the same expansion serves forward and backward searches.
  std::unordered_map<std::uint64_t, int> search(const std::vector<std::uint64_t>& sources) {
    std::unordered_map<std::uint64_t, int> dist;
    std::deque<std::uint64_t> queue;
    for (auto s : sources) {
      dist[s] = 0;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const std::uint64_t k = queue.front();
      queue.pop_front();
      const int d = dist.at(k);
      const std::uint32_t mask = mask_of(k);
      const Cell c = cell_of(k);
      const Grid& g = grid(mask);
      for (Direction dir : {Direction::North, Direction::South, Direction::East, Direction::West}) {
        const Cell n = step(c, dir);
        if (!g.is_open(n)) continue;
        const auto nk = key(mask, n);
        auto it = dist.find(nk);
        if (it == dist.end() || it->second > d) {
          dist[nk] = d;
          queue.push_front(nk);
        }
      }
      if (auto lever = spec_.lever_at(c)) {
        const auto nk = key(mask ^ (1U << *lever), c);
        auto it = dist.find(nk);
        if (it == dist.end() || it->second > d + 1) {
          dist[nk] = d + 1;
          queue.push_back(nk);
        }
      }
    }
    return dist;
  }

 private:
  const LevelSpec& spec_;
  std::uint64_t area_;
  std::unordered_map<std::uint32_t, Grid> grids_;
};

}  // namespace

AnalysisReport brute_force_oracle(const LevelSpec& spec) {
  spec.validate();
  PlayerSpace space(spec);
  const std::uint32_t rootMask = spec.initialConfig.mask();
  const auto forward = space.search({space.key(rootMask, spec.start)});

  AnalysisReport report;
  std::set<Cell> explorable;
  std::set<std::uint32_t> configs;
  std::vector<std::uint64_t> goals;
  for (const auto& [k, d] : forward) {
    const Cell c = space.cell_of(k);
    explorable.insert(c);
    configs.insert(space.mask_of(k));
    if (c == spec.exit) {
      goals.push_back(k);
      if (!report.minFlips || d < *report.minFlips) report.minFlips = d;
    }
  }
  report.solvable = report.minFlips.has_value();
  report.explorableCells.assign(explorable.begin(), explorable.end());

  std::set<Cell> attainable;
  for (std::uint32_t m : configs) {
    const Grid& g = space.grid(m);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.at(i) == Tile::Open) attainable.insert(g.cell_of(i));
    }
  }
  const double area = static_cast<double>(spec.base.width) * spec.base.height;
  report.explorableFraction = attainable.empty() ? 0.0
                                                 : static_cast<double>(explorable.size()) /
                                                       static_cast<double>(attainable.size());
  report.explorableAreaFraction = static_cast<double>(explorable.size()) / area;
  report.reachableConfigs = configs.size();
  for (Cell t : spec.treasures) report.treasures.push_back({t, explorable.count(t) > 0});

  if (report.solvable) {
    std::sort(goals.begin(), goals.end());
    const auto toGoal = space.search(goals);
    std::uint32_t mask = rootMask;
    Cell at = spec.start;
    int remaining = toGoal.at(space.key(mask, at));
    while (remaining > 0) {
      // Cells the player can walk to without flipping.
      std::set<Cell> roam;
      std::vector<Cell> stack{at};
      roam.insert(at);
      const Grid& g = space.grid(mask);
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (Direction dir : {Direction::North, Direction::South, Direction::East, Direction::West}) {
          const Cell n = step(c, dir);
          if (g.is_open(n) && roam.insert(n).second) stack.push_back(n);
        }
      }
      int chosen = -1;
      for (const Lever& l : spec.levers) {
        if (!roam.count(l.cell)) continue;
        auto it = toGoal.find(space.key(mask ^ (1U << l.id), l.cell));
        if (it != toGoal.end() && it->second == remaining - 1) {
          chosen = l.id;
          break;
        }
      }
      if (chosen < 0) fail(ErrorCode::InvalidArgument, "oracle: no descending flip found");
      report.solutionFlips.push_back(chosen);
      mask ^= 1U << chosen;
      at = spec.levers[chosen].cell;
      --remaining;
    }
    report.solutionPath = solution_script(spec, report.solutionFlips);
  }
  return report;
}

}  // namespace tomeria
