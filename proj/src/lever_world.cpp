#include "tomeria/lever_world.hpp"

#include <algorithm>

#include "tomeria/error.hpp"

namespace tomeria {

std::string_view axis_name(LeverAxis axis) {
  return axis == LeverAxis::Irc ? "IRC" : "NOI";
}

LeverAxis parse_axis(std::string_view text) {
  if (text == "IRC") return LeverAxis::Irc;
  if (text == "NOI") return LeverAxis::Noi;
  fail(ErrorCode::InvalidArgument, "lever axis must be \"IRC\" or \"NOI\"");
}

LeverConfig::LeverConfig(std::size_t count) : count_(count) {
  if (count > kMaxLevers) fail(ErrorCode::Capacity, "too many levers");
}

LeverConfig LeverConfig::from_mask(std::uint32_t mask, std::size_t count) {
  LeverConfig c(count);
  const std::uint32_t keep = count >= 32 ? ~0U : ((1U << count) - 1U);
  if ((mask & ~keep) != 0) fail(ErrorCode::InvalidArgument, "config mask has bits beyond lever count");
  c.mask_ = mask;
  return c;
}

LeverConfig LeverConfig::from_string(std::string_view text) {
  LeverConfig c(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == 'R') {
      c.mask_ |= 1U << i;
    } else if (text[i] != 'L') {
      fail(ErrorCode::InvalidArgument, "lever config characters must be 'L' or 'R'");
    }
  }
  return c;
}

LeverConfig LeverConfig::toggled(std::size_t i) const {
  if (i >= count_) fail(ErrorCode::InvalidArgument, "unknown lever " + std::to_string(i));
  LeverConfig c = *this;
  c.mask_ ^= 1U << i;
  return c;
}

std::string LeverConfig::to_string() const {
  std::string s(count_, 'L');
  for (std::size_t i = 0; i < count_; ++i) {
    if ((mask_ >> i) & 1U) s[i] = 'R';
  }
  return s;
}

void LevelSpec::validate() const {
  base.validate();
  if (levers.size() > LeverConfig::kMaxLevers) fail(ErrorCode::Capacity, "too many levers");
  if (initialConfig.size() != levers.size()) {
    fail(ErrorCode::InvalidArgument, "initialConfig length must equal lever count");
  }
  const Grid bounds(base.width, base.height);
  auto check_in = [&](Cell c, const char* what) {
    if (!bounds.in_bounds(c)) fail(ErrorCode::InvalidArgument, std::string(what) + " out of bounds");
  };
  check_in(start, "start");
  check_in(exit, "exit");
  std::vector<Cell> leverCells;
  for (std::size_t i = 0; i < levers.size(); ++i) {
    const Lever& l = levers[i];
    if (l.id != static_cast<int>(i)) fail(ErrorCode::InvalidArgument, "lever ids must be 0..L-1 in order");
    check_in(l.cell, "lever");
    if (l.axis == LeverAxis::Irc && (l.delta < -Chance::kScale || l.delta > Chance::kScale)) {
      fail(ErrorCode::InvalidArgument, "IRC lever delta must lie in [-1,1]");
    }
    leverCells.push_back(l.cell);
  }
  std::sort(leverCells.begin(), leverCells.end());
  if (std::adjacent_find(leverCells.begin(), leverCells.end()) != leverCells.end()) {
    fail(ErrorCode::InvalidArgument, "lever cells must be distinct");
  }
  if (!std::is_sorted(treasures.begin(), treasures.end()) ||
      std::adjacent_find(treasures.begin(), treasures.end()) != treasures.end()) {
    fail(ErrorCode::InvalidArgument, "treasures must be distinct and sorted");
  }
  for (Cell t : treasures) {
    check_in(t, "treasure");
    if (t == start || t == exit || std::binary_search(leverCells.begin(), leverCells.end(), t)) {
      fail(ErrorCode::InvalidArgument, "treasure cells must differ from start, exit and levers");
    }
  }
}

std::optional<int> LevelSpec::lever_at(Cell c) const {
  for (const Lever& l : levers) {
    if (l.cell == c) return l.id;
  }
  return std::nullopt;
}

std::vector<Cell> carved_cells(const LevelSpec& spec) {
  std::vector<Cell> cells{spec.start, spec.exit};
  for (const Lever& l : spec.levers) cells.push_back(l.cell);
  return cells;
}

GenParams effective_params(const LevelSpec& spec, const LeverConfig& config) {
  if (config.size() != spec.levers.size()) {
    fail(ErrorCode::InvalidArgument, "config length does not match lever count");
  }
  std::int64_t irc = spec.base.irc.micros();
  std::int64_t noi = spec.base.noi;
  for (std::size_t i = 0; i < spec.levers.size(); ++i) {
    if (config[i] == LeverState::Left) continue;
    const Lever& l = spec.levers[i];
    (l.axis == LeverAxis::Irc ? irc : noi) += l.delta;
  }
  GenParams p = spec.base;
  p.irc = Chance::from_micros(std::clamp<std::int64_t>(irc, 0, Chance::kScale));
  p.noi = static_cast<int>(std::max<std::int64_t>(0, noi));
  return p;
}

namespace {

void carve(const LevelSpec& spec, Grid& grid) {
  for (Cell c : carved_cells(spec)) grid.set(c, Tile::Open);
}

}  // namespace

Grid realize(const LevelSpec& spec, const LeverConfig& config, Exec exec) {
  Grid grid = generate(effective_params(spec, config), exec);
  carve(spec, grid);
  return grid;
}

Grid realize_from_field(const LevelSpec& spec, const RandomField& field,
                        const LeverConfig& config, Exec exec) {
  const GenParams p = effective_params(spec, config);
  Grid grid = generate_from_field(field, p.irc, p.noi, p.rule, exec);
  carve(spec, grid);
  return grid;
}

std::string annotated_rows(const LevelSpec& spec, const Grid& grid) {
  std::string out;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const Cell c{x, y};
      char ch = grid.at(c) == Tile::Block ? '#' : '.';
      if (ch == '.') {
        if (c == spec.start) {
          ch = 'S';
        } else if (c == spec.exit) {
          ch = 'E';
        } else if (spec.lever_at(c)) {
          ch = 'L';
        } else if (std::binary_search(spec.treasures.begin(), spec.treasures.end(), c)) {
          ch = 'T';
        }
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

GameState GameState::begin(std::shared_ptr<const LevelSpec> spec) {
  const LeverConfig initial = spec->initialConfig;
  return begin(std::move(spec), initial);
}

GameState GameState::begin(std::shared_ptr<const LevelSpec> spec, const LeverConfig& config) {
  if (!spec) fail(ErrorCode::InvalidArgument, "null level spec");
  spec->validate();
  GameState s;
  s.spec_ = std::move(spec);
  s.config_ = config;
  s.grid_ = std::make_shared<const Grid>(realize(*s.spec_, config));
  s.player_ = s.spec_->start;
  s.complete_ = s.player_ == s.spec_->exit;
  return s;
}

GameState flip(const GameState& state, int leverId) {
  const LevelSpec& spec = state.spec();
  if (leverId < 0 || static_cast<std::size_t>(leverId) >= spec.levers.size()) {
    fail(ErrorCode::InvalidArgument, "unknown lever " + std::to_string(leverId));
  }
  if (spec.levers[leverId].cell != state.player()) {
    fail(ErrorCode::IllegalMove, "player is not standing on lever " + std::to_string(leverId));
  }
  GameState next = state;
  next.config_ = state.config().toggled(static_cast<std::size_t>(leverId));
  next.grid_ = std::make_shared<const Grid>(realize(spec, next.config_));
  ++next.flipCount_;
  return next;
}

GameState move(const GameState& state, Direction direction) {
  const Cell target = step(state.player(), direction);
  if (!state.grid().is_open(target)) {
    fail(ErrorCode::IllegalMove, std::string("cannot move ") + direction_letter(direction) +
                                     ": target blocked or out of bounds");
  }
  GameState next = state;
  next.player_ = target;
  const auto& treasures = state.spec().treasures;
  if (std::binary_search(treasures.begin(), treasures.end(), target)) {
    auto pos = std::lower_bound(next.collected_.begin(), next.collected_.end(), target);
    if (pos == next.collected_.end() || *pos != target) next.collected_.insert(pos, target);
  }
  if (target == state.spec().exit) next.complete_ = true;
  return next;
}

std::vector<Cell> preview_diff(const GameState& state, int leverId) {
  const LevelSpec& spec = state.spec();
  if (leverId < 0 || static_cast<std::size_t>(leverId) >= spec.levers.size()) {
    fail(ErrorCode::InvalidArgument, "unknown lever " + std::to_string(leverId));
  }
  const Grid other = realize(spec, state.config().toggled(static_cast<std::size_t>(leverId)));
  return diff_cells(state.grid(), other);
}

}  // namespace tomeria
