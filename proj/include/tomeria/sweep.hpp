#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tomeria/ca_generator.hpp"

namespace tomeria {

/// Inclusive value range stepped on the exact millionth scale.
std::vector<Chance> chance_range(Chance first, Chance last, Chance step);
std::vector<int> int_range(int first, int last, int step = 1);

struct SweepRow {
  Chance irc;
  int noi = 0;
  double density = 0.0;                   // BLOCK fraction
  double boundaryPairs = 0.0;             // mean OPEN/BLOCK adjacent pairs
  double largestComponentFraction = 0.0;  // largest OPEN component / area
};

/// Expressive-range table. Each (irc, noi) cell averages over seeds
/// base.seed .. base.seed + seedsPerCell - 1. Rows are ordered irc-major.
std::vector<SweepRow> expressive_sweep(const GenParams& base, const std::vector<Chance>& ircValues,
                                       const std::vector<int>& noiValues, int seedsPerCell,
                                       Exec exec = Exec::Parallel);

/// CSV with header irc,noi,density,boundary_pairs,largest_component_fraction.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Per-seed boundary-pair counts for noi = 0..maxNoi at base.irc:
/// result[s][n] for seed base.seed + s.
std::vector<std::vector<std::size_t>> boundary_profile(const GenParams& base, int maxNoi, int seeds,
                                                       Exec exec = Exec::Parallel);

}  // namespace tomeria
