#include "tomeria/sweep.hpp"

#include <algorithm>
#include <cstdio>

#include "tomeria/error.hpp"

namespace tomeria {

std::vector<Chance> chance_range(Chance first, Chance last, Chance step) {
  if (step.micros() <= 0) fail(ErrorCode::InvalidArgument, "range step must be positive");
  if (last < first) fail(ErrorCode::InvalidArgument, "range is empty");
  std::vector<Chance> out;
  for (std::int64_t m = first.micros(); m <= last.micros(); m += step.micros()) {
    out.push_back(Chance::from_micros(m));
  }
  return out;
}

std::vector<int> int_range(int first, int last, int step) {
  if (step <= 0) fail(ErrorCode::InvalidArgument, "range step must be positive");
  if (last < first) fail(ErrorCode::InvalidArgument, "range is empty");
  std::vector<int> out;
  for (int v = first; v <= last; v += step) out.push_back(v);
  return out;
}

namespace {

struct Metrics {
  std::size_t blocks = 0;
  std::size_t boundary = 0;
  std::size_t largest = 0;
};

}  // namespace

std::vector<SweepRow> expressive_sweep(const GenParams& base, const std::vector<Chance>& ircValues,
                                       const std::vector<int>& noiValues, int seedsPerCell,
                                       Exec exec) {
  if (ircValues.empty() || noiValues.empty()) fail(ErrorCode::InvalidArgument, "sweep ranges must be non-empty");
  if (seedsPerCell < 1) fail(ErrorCode::InvalidArgument, "seedsPerCell must be >= 1");
  for (Chance c : ircValues) {
    if (!c.in_unit_range()) fail(ErrorCode::InvalidArgument, "sweep irc outside [0,1]");
  }
  for (int n : noiValues) {
    if (n < 0) fail(ErrorCode::InvalidArgument, "sweep noi must be >= 0");
  }
  GenParams checked = base;
  checked.validate();
  const int maxNoi = *std::max_element(noiValues.begin(), noiValues.end());
  const std::size_t cells = ircValues.size() * noiValues.size();

  // perSeed[s][cell]: one slot per seed so the reduction below runs in seed order.
  std::vector<std::vector<Metrics>> perSeed(static_cast<std::size_t>(seedsPerCell));
  for_each_index(perSeed.size(), exec, [&](std::size_t s) {
    auto& out = perSeed[s];
    out.resize(cells);
    const RandomField field = random_field(base.seed + s, base.width, base.height);
    for (std::size_t a = 0; a < ircValues.size(); ++a) {
      Grid grid = threshold_initial(field, ircValues[a]);
      for (int noi = 0; noi <= maxNoi; ++noi) {
        if (noi > 0) grid = ca_step(grid, base.rule);
        for (std::size_t b = 0; b < noiValues.size(); ++b) {
          if (noiValues[b] != noi) continue;
          Metrics& m = out[a * noiValues.size() + b];
          m.blocks = grid.count(Tile::Block);
          m.boundary = boundary_pairs(grid);
          m.largest = largest_component_size(grid);
        }
      }
    }
  });

  const double area = static_cast<double>(base.width) * base.height;
  const double n = seedsPerCell;
  std::vector<SweepRow> rows;
  for (std::size_t a = 0; a < ircValues.size(); ++a) {
    for (std::size_t b = 0; b < noiValues.size(); ++b) {
      double blocks = 0, boundary = 0, largest = 0;
      for (const auto& seed : perSeed) {
        const Metrics& m = seed[a * noiValues.size() + b];
        blocks += static_cast<double>(m.blocks);
        boundary += static_cast<double>(m.boundary);
        largest += static_cast<double>(m.largest);
      }
      rows.push_back({ircValues[a], noiValues[b], blocks / (n * area), boundary / n, largest / (n * area)});
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "irc,noi,density,boundary_pairs,largest_component_fraction\n";
  char line[160];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof line, "%s,%d,%.6f,%.6f,%.6f\n", format_irc(r.irc).c_str(), r.noi,
                  r.density, r.boundaryPairs, r.largestComponentFraction);
    out += line;
  }
  return out;
}

std::vector<std::vector<std::size_t>> boundary_profile(const GenParams& base, int maxNoi, int seeds,
                                                       Exec exec) {
  if (maxNoi < 0 || seeds < 1) fail(ErrorCode::InvalidArgument, "profile needs maxNoi >= 0 and seeds >= 1");
  base.validate();
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(seeds));
  for_each_index(out.size(), exec, [&](std::size_t s) {
    const RandomField field = random_field(base.seed + s, base.width, base.height);
    Grid grid = threshold_initial(field, base.irc);
    out[s].push_back(boundary_pairs(grid));
    for (int noi = 1; noi <= maxNoi; ++noi) {
      grid = ca_step(grid, base.rule);
      out[s].push_back(boundary_pairs(grid));
    }
  });
  return out;
}

}  // namespace tomeria
