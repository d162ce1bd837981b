#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "test_util.hpp"
#include "tomeria/analyzer.hpp"
#include "tomeria/error.hpp"
#include "tomeria/rng.hpp"

using namespace tomeria;

namespace {

// Golden 8x8 base. With irc lowered by 0.05 a corridor opens from the start
// room down to (3,7), which is walled off otherwise:
//   L: ###E####   R: ###E####
//      ####..##      #.....##
LevelSpec one_lever_spec() {
  LevelSpec s;
  s.base = testutil::params(1, 8, 8, 0.45, 2);
  s.levers = {{0, {1, 1}, LeverAxis::Irc, -50'000}};
  s.start = {1, 1};
  s.exit = {3, 7};
  s.initialConfig = LeverConfig(1);
  s.validate();
  return s;
}

std::set<std::pair<int, int>> flood(const Grid& g, Cell from) {
  std::set<std::pair<int, int>> seen;
  std::function<void(Cell)> visit = [&](Cell c) {
    if (!g.is_open(c) || !seen.insert({c.y, c.x}).second) return;
    for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West}) visit(step(c, d));
  };
  visit(from);
  return seen;
}

LevelSpec random_spec(SplitMix64& rng) {
  LevelSpec s;
  s.base = testutil::params(rng.next(), 6 + static_cast<int>(rng.next_below(12)),
                            6 + static_cast<int>(rng.next_below(12)), 0.35 + 0.2 * rng.next_unit(),
                            static_cast<int>(rng.next_below(5)));
  const Grid bounds(s.base.width, s.base.height);
  std::vector<std::size_t> cells(bounds.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.next_below(i)]);
  const int levers = static_cast<int>(rng.next_below(4));
  std::size_t next = 0;
  for (int i = 0; i < levers; ++i) {
    const bool irc = rng.next_below(2) == 0;
    const std::int64_t sign = rng.next_below(2) == 0 ? 1 : -1;
    s.levers.push_back({i, bounds.cell_of(cells[next++]), irc ? LeverAxis::Irc : LeverAxis::Noi,
                        irc ? sign * 50'000 : sign});
  }
  s.start = bounds.cell_of(cells[next++]);
  s.exit = bounds.cell_of(cells[next++]);
  for (int t = 0; t < 2; ++t) s.treasures.push_back(bounds.cell_of(cells[next++]));
  std::sort(s.treasures.begin(), s.treasures.end());
  s.initialConfig = LeverConfig(s.levers.size());
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("reachable_cells agrees with a recursive flood fill on the golden grid") {
  const Grid g = generate(testutil::params(1, 8, 8, 0.45, 2));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell_of(i);
    if (!g.is_open(c)) {
      CHECK_THROWS_AS(reachable_cells(g, c), Error);
      continue;
    }
    std::set<std::pair<int, int>> got;
    for (Cell r : reachable_cells(g, c)) got.insert({r.y, r.x});
    CHECK(got == flood(g, c));
  }
  CHECK(reachable_cells(g, {1, 1}).size() == 27);
  CHECK(reachable_cells(testutil::grid_from({"#.#", "#.#", "###"}), {1, 0}).size() == 2);
  CHECK(reachable_cells(testutil::grid_from({".#.", "#.#", ".#."}), {1, 1}).size() == 1);
}

TEST_CASE("enumerate_configs covers every mask") {
  LevelSpec s = one_lever_spec();
  s.levers.push_back({1, {2, 2}, LeverAxis::Noi, 1});
  s.levers.push_back({2, {3, 3}, LeverAxis::Irc, 5000});
  s.initialConfig = LeverConfig(3);
  const ConfigTable table = enumerate_configs(s);
  REQUIRE(table.grids.size() == 8);
  for (std::uint32_t m = 0; m < 8; ++m) CHECK(table.at(m) == realize(s, LeverConfig::from_mask(m, 3)));
  CHECK(enumerate_configs(s, {16, Exec::Serial}).grids == table.grids);
  CHECK(table.at(0b001) != table.at(0));
}

TEST_CASE("hand-built one-lever level") {
  const LevelSpec s = one_lever_spec();
  const StateGraph g = build_state_graph(s);
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.edges.size() == 2);
  CHECK(g.nodes[0].config.to_string() == "L");
  CHECK(g.nodes[0].component == Cell{1, 1});
  CHECK(g.nodes[1].config.to_string() == "R");
  CHECK(g.depth == std::vector<int>{0, 1});

  const AnalysisReport r = analyze(s);
  CHECK(r.solvable);
  CHECK(r.minFlips == 1);
  CHECK(r.reachableConfigs == 2);
  CHECK(r.solutionFlips == std::vector<int>{0});
  REQUIRE(r.solutionPath);
  CHECK(r.solutionPath->size() == 9);
  CHECK(r.solutionPath->front() == ScriptStep{ScriptStep::Op::Flip, Direction::North, 0});

  // The script plays out on the real game rules.
  GameState st = GameState::begin(std::make_shared<const LevelSpec>(s));
  for (const ScriptStep& step : *r.solutionPath) {
    st = step.op == ScriptStep::Op::Flip ? flip(st, step.lever) : move(st, step.direction);
  }
  CHECK(st.complete());

  const AnalysisReport o = brute_force_oracle(s);
  CHECK(report_to_json(o) == report_to_json(r));
}

TEST_CASE("levels without levers") {
  LevelSpec s = one_lever_spec();
  s.levers.clear();
  s.initialConfig = LeverConfig(0);
  const StateGraph g = build_state_graph(s);
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
  const AnalysisReport r = analyze(s);
  CHECK(r.reachableConfigs == 1);
  CHECK_FALSE(r.solvable);
  CHECK_FALSE(r.minFlips);
  CHECK_FALSE(r.solutionPath);
  CHECK(report_to_json(r)["minFlips"].is_null());

  s.exit = {5, 5};
  const AnalysisReport near = analyze(s);
  CHECK(near.minFlips == 0);
  CHECK(near.explorableFraction == doctest::Approx(1.0));
}

TEST_CASE("a carved exit walled off in every config is unsolvable") {
  LevelSpec s;
  s.base = testutil::params(5, 12, 12, 1.0, 0);
  s.levers = {{0, {0, 0}, LeverAxis::Irc, -5000}, {1, {1, 0}, LeverAxis::Noi, 1}};
  s.start = {0, 0};
  s.exit = {8, 8};
  s.initialConfig = LeverConfig(2);
  const AnalysisReport r = analyze(s);
  CHECK_FALSE(r.solvable);
  CHECK(r.explorableCells.size() == 2);
  CHECK(report_to_json(r) == report_to_json(brute_force_oracle(s)));
}

TEST_CASE("analyze matches the brute-force oracle on random small levels") {
  SplitMix64 rng(8675309);
  int solvable = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const LevelSpec s = random_spec(rng);
    const AnalysisReport a = analyze(s);
    const AnalysisReport o = brute_force_oracle(s);
    INFO("seed " << s.base.seed);
    CHECK(a.solvable == o.solvable);
    CHECK(a.minFlips == o.minFlips);
    CHECK(a.explorableCells == o.explorableCells);
    CHECK(a.treasures == o.treasures);
    CHECK(report_to_json(a) == report_to_json(o));
    if (a.solvable) {
      ++solvable;
      CHECK(*a.minFlips <= static_cast<int>(s.levers.size()) * 2);
    }
  }
  CHECK(solvable > 5);
}

TEST_CASE("every state graph edge has a reverse edge") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    const LevelSpec s = random_spec(rng);
    const StateGraph g = build_state_graph(s);
    std::set<std::tuple<std::size_t, int, std::size_t>> edges;
    for (const StateEdge& e : g.edges) edges.insert({e.from, e.lever, e.to});
    for (const StateEdge& e : g.edges) CHECK(edges.count({e.to, e.lever, e.from}) == 1);
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
      const Grid grid = realize(s, g.nodes[n].config);
      CHECK(grid.is_open(g.nodes[n].component));
      CHECK(reachable_cells(grid, g.nodes[n].component).front() == g.nodes[n].component);
    }
  }
}

TEST_CASE("component sizes along a solution") {
  const LevelSpec s = one_lever_spec();
  const auto sizes = component_sizes_along(s, std::vector<int>{0});
  REQUIRE(sizes.size() == 2);
  CHECK(sizes[0] == 27);
  CHECK(sizes[1] > sizes[0]);
}

TEST_CASE("too many levers is a capacity error") {
  LevelSpec s;
  s.base = testutil::params(5, 20, 20, 0.45, 2);
  for (int i = 0; i < 17; ++i) s.levers.push_back({i, {i, 0}, LeverAxis::Noi, 1});
  s.start = {0, 5};
  s.exit = {19, 19};
  s.initialConfig = LeverConfig(17);
  try {
    analyze(s);
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Capacity);
  }
}

TEST_CASE("script JSON round trip") {
  const std::vector<ScriptStep> script = {{ScriptStep::Op::Move, Direction::East, 0},
                                          {ScriptStep::Op::Flip, Direction::North, 3}};
  const Json j = script_to_json(script);
  CHECK(j.dump() == R"([{"op":"move","arg":"E"},{"op":"flip","arg":3}])");
  CHECK(script_from_json(j) == script);
}
