#include "tomeria/analyzer.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "tomeria/error.hpp"

namespace tomeria {

std::vector<Cell> reachable_cells(const Grid& grid, Cell from) {
  if (!grid.is_open(from)) fail(ErrorCode::InvalidArgument, "flood fill must start on an OPEN cell");
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::vector<std::size_t> stack{grid.index_of(from)};
  seen[stack.back()] = 1;
  std::vector<Cell> out;
  while (!stack.empty()) {
    const Cell c = grid.cell_of(stack.back());
    stack.pop_back();
    out.push_back(c);
    for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West}) {
      const Cell n = step(c, d);
      if (!grid.is_open(n)) continue;
      const std::size_t ni = grid.index_of(n);
      if (seen[ni]) continue;
      seen[ni] = 1;
      stack.push_back(ni);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConfigTable enumerate_configs(const LevelSpec& spec, const AnalysisOptions& options) {
  const std::size_t leverCount = spec.levers.size();
  if (leverCount > options.maxLevers) {
    fail(ErrorCode::Capacity, "level has " + std::to_string(leverCount) +
                                  " levers; analysis is capped at " +
                                  std::to_string(options.maxLevers));
  }
  spec.validate();
  const std::size_t configs = std::size_t{1} << leverCount;
  const RandomField field = random_field(spec.base.seed, spec.base.width, spec.base.height);

  // Many configs share effective parameters; generate each distinct pair once.
  std::map<std::pair<std::int64_t, int>, std::size_t> distinct;
  std::vector<GenParams> uniqueParams;
  std::vector<std::size_t> slot(configs);
  for (std::size_t m = 0; m < configs; ++m) {
    const GenParams p =
        effective_params(spec, LeverConfig::from_mask(static_cast<std::uint32_t>(m), leverCount));
    auto [it, inserted] = distinct.try_emplace({p.irc.micros(), p.noi}, uniqueParams.size());
    if (inserted) uniqueParams.push_back(p);
    slot[m] = it->second;
  }

  std::vector<Grid> bases(uniqueParams.size());
  for_each_index(uniqueParams.size(), options.exec, [&](std::size_t i) {
    const GenParams& p = uniqueParams[i];
    bases[i] = generate_from_field(field, p.irc, p.noi, p.rule, Exec::Serial);
  });

  const std::vector<Cell> carved = carved_cells(spec);
  ConfigTable table{leverCount, std::vector<Grid>(configs)};
  for_each_index(configs, options.exec, [&](std::size_t m) {
    Grid g = bases[slot[m]];
    for (Cell c : carved) g.set(c, Tile::Open);
    table.grids[m] = std::move(g);
  });
  return table;
}

namespace {

struct GraphWork {
  StateGraph graph;
  std::vector<std::vector<std::int32_t>> labels;  // by mask; empty until needed
  std::vector<std::uint32_t> masks;                // per node
  std::vector<std::int32_t> comps;                 // per node, row-major label
};

GraphWork explore(const LevelSpec& spec, const ConfigTable& table, const AnalysisOptions& options) {
  GraphWork w;
  w.labels.resize(table.grids.size());
  const Grid& shape = table.grids.front();
  std::vector<std::size_t> leverIndex;
  for (const Lever& l : spec.levers) leverIndex.push_back(shape.index_of(l.cell));

  auto ensure_labels = [&](std::vector<std::uint32_t> masks) {
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::erase_if(masks, [&](std::uint32_t m) { return !w.labels[m].empty(); });
    for_each_index(masks.size(), options.exec,
                   [&](std::size_t i) { w.labels[masks[i]] = label_components(table.at(masks[i])); });
  };

  std::unordered_map<std::uint64_t, std::size_t> index;
  auto key = [](std::uint32_t mask, std::int32_t comp) {
    return (static_cast<std::uint64_t>(mask) << 32) | static_cast<std::uint32_t>(comp);
  };
  auto add_node = [&](std::uint32_t mask, std::int32_t comp, int depth) {
    const std::size_t id = w.graph.nodes.size();
    w.graph.nodes.push_back(
        {LeverConfig::from_mask(mask, table.leverCount), shape.cell_of(static_cast<std::size_t>(comp))});
    w.graph.depth.push_back(depth);
    w.masks.push_back(mask);
    w.comps.push_back(comp);
    index.emplace(key(mask, comp), id);
    return id;
  };

  const std::uint32_t rootMask = spec.initialConfig.mask();
  ensure_labels({rootMask});
  w.graph.root = add_node(rootMask, w.labels[rootMask][shape.index_of(spec.start)], 0);

  std::vector<std::size_t> frontier{w.graph.root};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> wanted;
    for (std::size_t n : frontier) {
      for (std::size_t i = 0; i < leverIndex.size(); ++i) {
        if (w.labels[w.masks[n]][leverIndex[i]] == w.comps[n]) wanted.push_back(w.masks[n] ^ (1U << i));
      }
    }
    ensure_labels(std::move(wanted));

    std::vector<std::size_t> next;
    for (std::size_t n : frontier) {
      const std::uint32_t mask = w.masks[n];
      for (std::size_t i = 0; i < leverIndex.size(); ++i) {
        if (w.labels[mask][leverIndex[i]] != w.comps[n]) continue;
        const std::uint32_t toMask = mask ^ (1U << i);
        const std::int32_t toComp = w.labels[toMask][leverIndex[i]];
        std::size_t to;
        if (auto it = index.find(key(toMask, toComp)); it != index.end()) {
          to = it->second;
        } else {
          to = add_node(toMask, toComp, w.graph.depth[n] + 1);
          next.push_back(to);
        }
        w.graph.edges.push_back({n, static_cast<int>(i), to});
      }
    }
    frontier = std::move(next);
  }
  return w;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

constexpr Direction kDirections[] = {Direction::North, Direction::South, Direction::East,
                                     Direction::West};

// Shortest walk from -> to on OPEN cells; neighbours expanded in N,S,E,W order.
std::optional<std::vector<Direction>> shortest_walk(const Grid& grid, Cell from, Cell to) {
  if (!grid.is_open(from) || !grid.is_open(to)) return std::nullopt;
  constexpr std::int8_t kUnseen = -1;
  std::vector<std::int8_t> via(grid.size(), kUnseen);
  std::deque<Cell> queue{from};
  via[grid.index_of(from)] = 4;
  while (!queue.empty() && via[grid.index_of(to)] == kUnseen) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      const Cell n = step(c, kDirections[d]);
      if (!grid.is_open(n) || via[grid.index_of(n)] != kUnseen) continue;
      via[grid.index_of(n)] = static_cast<std::int8_t>(d);
      queue.push_back(n);
    }
  }
  if (via[grid.index_of(to)] == kUnseen) return std::nullopt;
  std::vector<Direction> walk;
  for (Cell c = to; c != from;) {
    const Direction d = kDirections[via[grid.index_of(c)]];
    walk.push_back(d);
    switch (d) {
      case Direction::North: c = step(c, Direction::South); break;
      case Direction::South: c = step(c, Direction::North); break;
      case Direction::East: c = step(c, Direction::West); break;
      case Direction::West: c = step(c, Direction::East); break;
    }
  }
  std::reverse(walk.begin(), walk.end());
  return walk;
}

}  // namespace

StateGraph build_state_graph(const LevelSpec& spec, const AnalysisOptions& options) {
  const ConfigTable table = enumerate_configs(spec, options);
  return explore(spec, table, options).graph;
}

StateGraph build_state_graph(const LevelSpec& spec, const ConfigTable& table,
                             const AnalysisOptions& options) {
  return explore(spec, table, options).graph;
}

AnalysisReport analyze(const LevelSpec& spec, const AnalysisOptions& options) {
  const ConfigTable table = enumerate_configs(spec, options);
  const GraphWork w = explore(spec, table, options);
  const StateGraph& g = w.graph;
  const Grid& shape = table.grids.front();
  const std::size_t exitIndex = shape.index_of(spec.exit);

  AnalysisReport report;
  std::vector<std::uint8_t> goal(g.nodes.size(), 0);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (w.labels[w.masks[n]][exitIndex] != w.comps[n]) continue;
    goal[n] = 1;
    if (!report.minFlips) report.minFlips = g.depth[n];  // nodes are in BFS order
  }
  report.solvable = report.minFlips.has_value();

  std::map<std::uint32_t, std::vector<std::int32_t>> byMask;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) byMask[w.masks[n]].push_back(w.comps[n]);
  std::vector<std::uint8_t> explorable(shape.size(), 0);
  std::vector<std::uint8_t> attainable(shape.size(), 0);
  for (const auto& [mask, comps] : byMask) {
    const auto& labels = w.labels[mask];
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0) continue;
      attainable[i] = 1;
      if (std::find(comps.begin(), comps.end(), labels[i]) != comps.end()) explorable[i] = 1;
    }
  }
  for (std::size_t i = 0; i < explorable.size(); ++i) {
    if (explorable[i]) report.explorableCells.push_back(shape.cell_of(i));
  }
  const auto attainableCount = static_cast<std::size_t>(std::count(attainable.begin(), attainable.end(), 1));
  report.explorableFraction = ratio(report.explorableCells.size(), attainableCount);
  report.explorableAreaFraction = ratio(report.explorableCells.size(), shape.size());
  report.reachableConfigs = byMask.size();
  for (Cell t : spec.treasures) report.treasures.push_back({t, explorable[shape.index_of(t)] != 0});

  if (report.solvable) {
    // Distance to the nearest goal node, walking edges backwards.
    std::vector<std::vector<std::size_t>> incoming(g.nodes.size());
    std::vector<std::vector<std::pair<int, std::size_t>>> outgoing(g.nodes.size());
    for (const StateEdge& e : g.edges) {
      incoming[e.to].push_back(e.from);
      outgoing[e.from].emplace_back(e.lever, e.to);
    }
    constexpr int kFar = std::numeric_limits<int>::max();
    std::vector<int> toGoal(g.nodes.size(), kFar);
    std::deque<std::size_t> queue;
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
      if (goal[n]) {
        toGoal[n] = 0;
        queue.push_back(n);
      }
    }
    while (!queue.empty()) {
      const std::size_t n = queue.front();
      queue.pop_front();
      for (std::size_t p : incoming[n]) {
        if (toGoal[p] != kFar) continue;
        toGoal[p] = toGoal[n] + 1;
        queue.push_back(p);
      }
    }
    for (std::size_t cur = g.root; toGoal[cur] > 0;) {
      int bestLever = std::numeric_limits<int>::max();
      std::size_t bestNode = cur;
      for (auto [lever, to] : outgoing[cur]) {
        if (toGoal[to] == toGoal[cur] - 1 && lever < bestLever) {
          bestLever = lever;
          bestNode = to;
        }
      }
      report.solutionFlips.push_back(bestLever);
      cur = bestNode;
    }
    report.solutionPath = solution_script(spec, report.solutionFlips);
  }
  return report;
}

std::vector<ScriptStep> solution_script(const LevelSpec& spec, std::span<const int> flips) {
  LeverConfig config = spec.initialConfig;
  Grid grid = realize(spec, config);
  Cell player = spec.start;
  std::vector<ScriptStep> script;
  auto walk_to = [&](Cell target) {
    const auto walk = shortest_walk(grid, player, target);
    if (!walk) fail(ErrorCode::InvalidArgument, "script target unreachable");
    for (Direction d : *walk) script.push_back({ScriptStep::Op::Move, d, 0});
    player = target;
  };
  for (int lever : flips) {
    if (lever < 0 || static_cast<std::size_t>(lever) >= spec.levers.size()) {
      fail(ErrorCode::InvalidArgument, "unknown lever in script");
    }
    walk_to(spec.levers[lever].cell);
    script.push_back({ScriptStep::Op::Flip, Direction::North, lever});
    config = config.toggled(static_cast<std::size_t>(lever));
    grid = realize(spec, config);
  }
  walk_to(spec.exit);
  return script;
}

std::vector<std::size_t> component_sizes_along(const LevelSpec& spec, std::span<const int> flips) {
  LeverConfig config = spec.initialConfig;
  std::vector<std::size_t> sizes{reachable_cells(realize(spec, config), spec.start).size()};
  for (int lever : flips) {
    config = config.toggled(static_cast<std::size_t>(lever));
    sizes.push_back(reachable_cells(realize(spec, config), spec.levers.at(lever).cell).size());
  }
  return sizes;
}

Json script_to_json(std::span<const ScriptStep> script) {
  Json out = Json::array();
  for (const ScriptStep& s : script) {
    Json step;
    if (s.op == ScriptStep::Op::Move) {
      step["op"] = "move";
      step["arg"] = std::string(1, direction_letter(s.direction));
    } else {
      step["op"] = "flip";
      step["arg"] = s.lever;
    }
    out.push_back(std::move(step));
  }
  return out;
}

std::vector<ScriptStep> script_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidArgument, "script must be an array");
  std::vector<ScriptStep> script;
  try {
    for (const Json& s : j) {
      const std::string op = s.at("op").get<std::string>();
      if (op == "move") {
        script.push_back({ScriptStep::Op::Move, parse_direction(s.at("arg").get<std::string>()), 0});
      } else if (op == "flip") {
        script.push_back({ScriptStep::Op::Flip, Direction::North, s.at("arg").get<int>()});
      } else {
        fail(ErrorCode::InvalidArgument, "unknown script op \"" + op + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed script: ") + e.what());
  }
  return script;
}

Json report_to_json(const AnalysisReport& r) {
  Json j;
  j["solvable"] = r.solvable;
  j["minFlips"] = r.minFlips ? Json(*r.minFlips) : Json(nullptr);
  j["explorableFraction"] = r.explorableFraction;
  j["explorableAreaFraction"] = r.explorableAreaFraction;
  j["explorableCells"] = r.explorableCells.size();
  j["reachableConfigs"] = r.reachableConfigs;
  Json treasures = Json::array();
  for (const TreasureStatus& t : r.treasures) {
    Json tj;
    tj["cell"] = cell_to_json(t.cell);
    tj["reachable"] = t.reachable;
    treasures.push_back(std::move(tj));
  }
  j["treasures"] = std::move(treasures);
  j["solution"] = r.solutionPath ? script_to_json(*r.solutionPath) : Json(nullptr);
  return j;
}

}  // namespace tomeria
