#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tomeria/grid.hpp"
#include "tomeria/kernels.hpp"

namespace tomeria {

/// Initial Random Chance, held as an exact count of millionths.
///
/// Lever deltas are summed on this integer scale, so repeated flips land on
/// exactly the same threshold regardless of order. The threshold applied to
/// the random field is micros / 1e6, the correctly rounded double of the
/// decimal value (0.450000 compares as the literal 0.45).
class Chance {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Chance() = default;
  static constexpr Chance from_micros(std::int64_t micros) { return Chance(micros); }
  /// Rounds to the nearest millionth; does not range-check.
  static Chance from_double(double value);

  constexpr std::int64_t micros() const noexcept { return micros_; }
  double value() const noexcept { return static_cast<double>(micros_) / static_cast<double>(kScale); }
  constexpr bool in_unit_range() const noexcept { return micros_ >= 0 && micros_ <= kScale; }

  friend constexpr auto operator<=>(const Chance&, const Chance&) = default;

 private:
  constexpr explicit Chance(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

struct CaRule {
  int blockThreshold = 5;

  friend bool operator==(const CaRule&, const CaRule&) = default;
};

struct GenParams {
  std::uint64_t seed = 0;
  int width = 64;
  int height = 48;
  Chance irc = Chance::from_micros(450'000);
  int noi = 3;
  CaRule rule{};

  /// Throws invalid-argument unless every field is in its legal range.
  void validate() const;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

struct RandomField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

/// values[i] is the i-th SplitMix64 output (seeded with `seed`) mapped to
/// [0,1) via its top 53 bits, in row-major order.
RandomField random_field(std::uint64_t seed, int width, int height);

/// Cell i is BLOCK iff field.values[i] < irc.
Grid threshold_initial(const RandomField& field, Chance irc, Exec exec = Exec::Serial);
Grid threshold_initial(const RandomField& field, double irc, Exec exec = Exec::Serial);

/// One synchronous CA update; the input grid is left untouched.
Grid ca_step(const Grid& grid, CaRule rule, Exec exec = Exec::Serial);

/// Threshold followed by exactly `noi` CA steps on an already computed field.
Grid generate_from_field(const RandomField& field, Chance irc, int noi, CaRule rule,
                         Exec exec = Exec::Serial);

Grid generate(const GenParams& params, Exec exec = Exec::Serial);

// Grid text format: header "W H seed irc noi threshold" (irc with six
// decimals), then one newline-terminated row per line, '#' BLOCK, '.' OPEN.
std::string format_irc(Chance irc);
std::string grid_header(const GenParams& params);
std::string grid_rows(const Grid& grid);
std::string to_text(const Grid& grid, const GenParams& params);

struct ParsedGrid {
  GenParams params;
  Grid grid;
};
ParsedGrid parse_grid_text(std::string_view text);

}  // namespace tomeria
