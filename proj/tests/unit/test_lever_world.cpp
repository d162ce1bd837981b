#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "test_util.hpp"
#include "tomeria/error.hpp"
#include "tomeria/level_io.hpp"
#include "tomeria/lever_world.hpp"
#include "tomeria/rng.hpp"

using namespace tomeria;

namespace {

LevelSpec make_spec(GenParams base, std::vector<Lever> levers, Cell start, Cell exit) {
  LevelSpec s;
  s.base = base;
  for (std::size_t i = 0; i < levers.size(); ++i) levers[i].id = static_cast<int>(i);
  s.levers = std::move(levers);
  s.start = start;
  s.exit = exit;
  s.initialConfig = LeverConfig(s.levers.size());
  s.validate();
  return s;
}

std::shared_ptr<const LevelSpec> share(LevelSpec s) { return std::make_shared<const LevelSpec>(std::move(s)); }

}  // namespace

TEST_CASE("effective_params sums RIGHT levers only") {
  const GenParams base = testutil::params(3, 16, 16, 0.45, 3);
  const LevelSpec spec = make_spec(base,
                                   {{0, {1, 1}, LeverAxis::Irc, 5000},
                                    {0, {2, 1}, LeverAxis::Noi, 1},
                                    {0, {3, 1}, LeverAxis::Noi, 1}},
                                   {0, 0}, {5, 5});
  CHECK(effective_params(spec, LeverConfig::from_string("LLL")) == base);
  CHECK(effective_params(spec, LeverConfig::from_string("RLL")).irc.micros() == 455'000);
  CHECK(effective_params(spec, LeverConfig::from_string("RLL")).noi == 3);
  CHECK(effective_params(spec, LeverConfig::from_string("LRR")).noi == 5);
  CHECK(effective_params(spec, LeverConfig::from_string("LRR")).irc == base.irc);
  CHECK(effective_params(spec, LeverConfig::from_string("LRR")).seed == base.seed);
  CHECK_THROWS_AS(effective_params(spec, LeverConfig::from_string("LR")), Error);
}

TEST_CASE("effective_params clamps after summing") {
  const LevelSpec high = make_spec(testutil::params(3, 8, 8, 0.998, 1),
                                   {{0, {1, 1}, LeverAxis::Irc, 5000}, {0, {2, 2}, LeverAxis::Noi, -3}},
                                   {0, 0}, {5, 5});
  const GenParams p = effective_params(high, LeverConfig::from_string("RR"));
  CHECK(p.irc.micros() == Chance::kScale);
  CHECK(p.noi == 0);
}

TEST_CASE("lever config strings") {
  const LeverConfig c = LeverConfig::from_string("LRRL");
  CHECK(c.mask() == 0b0110);
  CHECK(c.to_string() == "LRRL");
  CHECK(c.toggled(0).to_string() == "RRRL");
  CHECK(c.toggled(3).toggled(3) == c);
  CHECK_THROWS_AS(LeverConfig::from_string("LX"), Error);
  CHECK_THROWS_AS(c.toggled(4), Error);
}

TEST_CASE("realize carves start, exit and lever cells") {
  const LevelSpec spec = make_spec(testutil::params(8, 12, 10, 1.0, 2),
                                   {{0, {4, 4}, LeverAxis::Irc, -5000}}, {0, 0}, {11, 9});
  for (const char* cfg : {"L", "R"}) {
    const Grid g = realize(spec, LeverConfig::from_string(cfg));
    CHECK(g.count(Tile::Open) == 3);
    for (Cell c : carved_cells(spec)) CHECK(g.is_open(c));
  }
}

TEST_CASE("one IRC lever on 16x16: diff is exactly the field interval") {
  const GenParams base = testutil::params(2024, 16, 16, 0.45, 0);
  const LevelSpec spec = make_spec(base, {{0, {7, 7}, LeverAxis::Irc, 5000}}, {0, 0}, {15, 15});
  const RandomField field = random_field(base.seed, 16, 16);
  std::vector<Cell> expected;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Cell c{static_cast<int>(i % 16), static_cast<int>(i / 16)};
    const bool carved = c == spec.start || c == spec.exit || c == spec.levers[0].cell;
    if (!carved && field.values[i] >= 0.45 && field.values[i] < 0.455) expected.push_back(c);
  }
  const Grid left = realize(spec, LeverConfig::from_string("L"));
  const Grid right = realize(spec, LeverConfig::from_string("R"));
  CHECK(diff_cells(left, right) == expected);

  // With CA steps the two grids still match an independent threshold-and-step pipeline.
  LevelSpec stepped = spec;
  stepped.base.noi = 2;
  for (double irc : {0.45, 0.455}) {
    Grid g = threshold_initial(field, irc);
    g = ca_step(ca_step(g, CaRule{5}), CaRule{5});
    for (Cell c : carved_cells(stepped)) g.set(c, Tile::Open);
    CHECK(g == realize(stepped, LeverConfig::from_string(irc == 0.45 ? "L" : "R")));
  }
}

TEST_CASE("flip requires standing on the lever and toggles exactly one lever") {
  const LevelSpec spec = make_spec(testutil::params(5, 10, 10, 0.0, 0),
                                   {{0, {0, 0}, LeverAxis::Irc, 5000}, {0, {3, 0}, LeverAxis::Noi, 1}},
                                   {0, 0}, {9, 9});
  const GameState s = GameState::begin(share(spec));
  const GameState a = flip(s, 0);
  CHECK(a.config().to_string() == "RL");
  CHECK(a.flip_count() == 1);
  CHECK(a.player() == s.player());
  CHECK_THROWS_AS(flip(s, 1), Error);
  try {
    flip(s, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllegalMove);
  }
  try {
    flip(s, 7);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  const GameState back = flip(a, 0);
  CHECK(back.config() == s.config());
  CHECK(back.grid() == s.grid());
  CHECK(back.flip_count() == 2);
}

TEST_CASE("move: blocked, out of bounds, treasure and exit") {
  LevelSpec spec = make_spec(testutil::params(5, 4, 3, 0.0, 0), {}, {0, 1}, {3, 1});
  spec.treasures = {{1, 1}};
  spec.validate();
  // noi=0 at irc 0 keeps every cell OPEN.
  const GameState s = GameState::begin(share(spec));
  CHECK_THROWS_AS(move(s, Direction::West), Error);
  const GameState t = move(s, Direction::East);
  CHECK(t.collected() == std::vector<Cell>{{1, 1}});
  const GameState t2 = move(move(t, Direction::West), Direction::East);
  CHECK(t2.collected().size() == 1);
  const GameState done = move(move(t2, Direction::East), Direction::East);
  CHECK(done.complete());

  LevelSpec walled = make_spec(testutil::params(5, 4, 4, 1.0, 0), {}, {0, 0}, {3, 3});
  const GameState w = GameState::begin(share(walled));
  try {
    move(w, Direction::East);
    FAIL("expected illegal-move");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllegalMove);
  }
}

TEST_CASE("preview_diff equals the grid change of the flip and is symmetric") {
  const LevelSpec spec = make_spec(testutil::params(77, 24, 18, 0.45, 3),
                                   {{0, {5, 5}, LeverAxis::Irc, -5000}, {0, {9, 9}, LeverAxis::Noi, 1}},
                                   {5, 5}, {20, 15});
  const GameState s = GameState::begin(share(spec));
  for (int k = 0; k < 2; ++k) {
    const auto diff = preview_diff(s, k);
    const GameState flipped = GameState::begin(s.spec_ptr(), s.config().toggled(static_cast<std::size_t>(k)));
    CHECK(diff == diff_cells(s.grid(), flipped.grid()));
    CHECK(preview_diff(flipped, k) == diff);
  }
  const auto diff0 = preview_diff(s, 0);
  CHECK(diff_cells(s.grid(), flip(s, 0).grid()) == diff0);
  CHECK(s.config().to_string() == "LL");
  CHECK_THROWS_AS(preview_diff(s, 2), Error);
}

TEST_CASE("a lever pushing a clamped irc further has an empty preview") {
  LevelSpec spec = make_spec(testutil::params(11, 16, 16, 1.0, 2),
                             {{0, {3, 3}, LeverAxis::Irc, 5000}}, {0, 0}, {15, 15});
  const GameState s = GameState::begin(share(spec));
  CHECK(preview_diff(s, 0).empty());
}

TEST_CASE("flip algebra on random sequences") {
  SplitMix64 rng(31337);
  const LevelSpec spec = make_spec(testutil::params(9, 20, 16, 0.45, 2),
                                   {{0, {1, 1}, LeverAxis::Irc, 5000},
                                    {0, {2, 1}, LeverAxis::Irc, -5000},
                                    {0, {3, 1}, LeverAxis::Noi, 1},
                                    {0, {4, 1}, LeverAxis::Noi, -1}},
                                   {0, 0}, {19, 15});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> seq(1 + rng.next_below(12));
    for (auto& k : seq) k = rng.next_below(4);
    LeverConfig a(4);
    for (auto k : seq) a = a.toggled(k);
    auto shuffled = seq;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
    LeverConfig b(4);
    for (auto k : shuffled) b = b.toggled(k);
    CHECK(a == b);
    CHECK(realize(spec, a) == realize(spec, b));
  }
}

TEST_CASE("level JSON round trip keeps canonical order") {
  LevelSpec spec = make_spec(testutil::params(4, 10, 8, 0.45, 2),
                             {{0, {1, 1}, LeverAxis::Irc, -5000}, {0, {2, 2}, LeverAxis::Noi, 1}},
                             {0, 0}, {9, 7});
  spec.treasures = {{4, 4}};
  spec.initialConfig = LeverConfig::from_string("LR");
  const Json j = level_to_json(spec);
  CHECK(level_from_json(j) == spec);
  CHECK(j.dump() ==
        R"({"base":{"seed":4,"width":10,"height":8,"irc":0.45,"noi":2,"blockThreshold":5},)"
        R"("levers":[{"id":0,"cell":[1,1],"axis":"IRC","delta":-0.005},{"id":1,"cell":[2,2],"axis":"NOI","delta":1}],)"
        R"("start":[0,0],"exit":[9,7],"treasures":[[4,4]],"initialConfig":"LR"})");
}

TEST_CASE("spec validation") {
  const GenParams base = testutil::params(4, 10, 8, 0.45, 2);
  CHECK_THROWS_AS(make_spec(base, {}, {10, 0}, {1, 1}), Error);
  CHECK_THROWS_AS(make_spec(base, {{0, {1, 1}, LeverAxis::Irc, 5000}, {0, {1, 1}, LeverAxis::Noi, 1}},
                            {0, 0}, {2, 2}),
                  Error);
  LevelSpec s = make_spec(base, {{0, {1, 1}, LeverAxis::Irc, 5000}}, {0, 0}, {2, 2});
  s.treasures = {{1, 1}};
  CHECK_THROWS_AS(s.validate(), Error);
  s.treasures.clear();
  s.initialConfig = LeverConfig(2);
  CHECK_THROWS_AS(s.validate(), Error);
}
