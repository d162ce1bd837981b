#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomeria/ca_generator.hpp"
#include "tomeria/grid.hpp"

namespace tomeria {

enum class LeverAxis { Irc, Noi };
enum class LeverState : std::uint8_t { Left, Right };

std::string_view axis_name(LeverAxis axis);
LeverAxis parse_axis(std::string_view text);

/// A lever shifts one generator parameter by `delta` while it is RIGHT.
/// IRC deltas are in millionths (5000 == 0.5%), NOI deltas in iterations.
struct Lever {
  int id = 0;
  Cell cell{};
  LeverAxis axis = LeverAxis::Irc;
  std::int64_t delta = 5000;

  static constexpr std::int64_t kDefaultIrcDelta = 5000;
  static constexpr std::int64_t kDefaultNoiDelta = 1;

  friend bool operator==(const Lever&, const Lever&) = default;
};

/// Ordered binary lever states, packed one bit per lever (bit i == lever i).
class LeverConfig {
 public:
  static constexpr std::size_t kMaxLevers = 32;

  LeverConfig() = default;
  explicit LeverConfig(std::size_t count);
  static LeverConfig from_mask(std::uint32_t mask, std::size_t count);
  /// One 'L' or 'R' per lever in id order.
  static LeverConfig from_string(std::string_view text);

  std::size_t size() const noexcept { return count_; }
  std::uint32_t mask() const noexcept { return mask_; }
  LeverState operator[](std::size_t i) const noexcept {
    return (mask_ >> i) & 1U ? LeverState::Right : LeverState::Left;
  }
  LeverConfig toggled(std::size_t i) const;
  std::string to_string() const;

  friend bool operator==(const LeverConfig&, const LeverConfig&) = default;

 private:
  std::uint32_t mask_ = 0;
  std::size_t count_ = 0;
};

struct LevelSpec {
  GenParams base;
  std::vector<Lever> levers;
  Cell start{};
  Cell exit{};
  std::vector<Cell> treasures;  // kept sorted row-major
  LeverConfig initialConfig;
  bool previewEnabled = true;

  /// Throws invalid-argument on any violated structural invariant.
  void validate() const;
  std::optional<int> lever_at(Cell c) const;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Cells forced OPEN in every realized grid: start, exit and lever cells.
std::vector<Cell> carved_cells(const LevelSpec& spec);

GenParams effective_params(const LevelSpec& spec, const LeverConfig& config);

/// Generates the effective grid and carves start, exit and lever cells.
Grid realize(const LevelSpec& spec, const LeverConfig& config, Exec exec = Exec::Serial);
/// As realize, reusing a field already computed for spec.base.
Grid realize_from_field(const LevelSpec& spec, const RandomField& field,
                        const LeverConfig& config, Exec exec = Exec::Serial);

/// Text grid with 'S','E','L','T' drawn over OPEN cells (S > E > L > T).
std::string annotated_rows(const LevelSpec& spec, const Grid& grid);

/// Immutable play state. Operations return new states.
class GameState {
 public:
  static GameState begin(std::shared_ptr<const LevelSpec> spec);
  static GameState begin(std::shared_ptr<const LevelSpec> spec, const LeverConfig& config);

  const LevelSpec& spec() const noexcept { return *spec_; }
  const std::shared_ptr<const LevelSpec>& spec_ptr() const noexcept { return spec_; }
  const LeverConfig& config() const noexcept { return config_; }
  const Grid& grid() const noexcept { return *grid_; }
  Cell player() const noexcept { return player_; }
  const std::vector<Cell>& collected() const noexcept { return collected_; }
  int flip_count() const noexcept { return flipCount_; }
  bool complete() const noexcept { return complete_; }

  friend GameState flip(const GameState& state, int leverId);
  friend GameState move(const GameState& state, Direction direction);

 private:
  std::shared_ptr<const LevelSpec> spec_;
  LeverConfig config_;
  std::shared_ptr<const Grid> grid_;
  Cell player_{};
  std::vector<Cell> collected_;
  int flipCount_ = 0;
  bool complete_ = false;
};

/// Toggles the lever under the player. illegal-move if the player is not on
/// the lever's cell; invalid-argument for an unknown lever.
GameState flip(const GameState& state, int leverId);
/// One 4-connected step onto an in-bounds OPEN cell, else illegal-move.
GameState move(const GameState& state, Direction direction);
/// Cells whose tile would change if `leverId` were toggled. Read-only.
std::vector<Cell> preview_diff(const GameState& state, int leverId);

}  // namespace tomeria
