#include "tomeria/ca_generator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tomeria/error.hpp"
#include "tomeria/rng.hpp"

namespace tomeria {

Chance Chance::from_double(double value) {
  if (!std::isfinite(value) || std::fabs(value) > 1e12) {
    fail(ErrorCode::InvalidArgument, "irc must be a finite number");
  }
  return Chance(std::llround(value * static_cast<double>(kScale)));
}

void GenParams::validate() const {
  if (width < 1 || height < 1) fail(ErrorCode::InvalidArgument, "width and height must be >= 1");
  if (!irc.in_unit_range()) fail(ErrorCode::InvalidArgument, "irc must lie in [0,1]");
  if (noi < 0) fail(ErrorCode::InvalidArgument, "noi must be >= 0");
  if (rule.blockThreshold < 0 || rule.blockThreshold > 9) {
    fail(ErrorCode::InvalidArgument, "blockThreshold must lie in [0,9]");
  }
}

RandomField random_field(std::uint64_t seed, int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::InvalidArgument, "random field dimensions must be >= 1");
  }
  RandomField field{width, height, {}};
  field.values.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  SplitMix64 rng(seed);
  for (auto& v : field.values) v = rng.next_unit();
  return field;
}

Grid threshold_initial(const RandomField& field, Chance irc, Exec exec) {
  if (!irc.in_unit_range()) fail(ErrorCode::InvalidArgument, "irc must lie in [0,1]");
  Grid grid(field.width, field.height);
  if (exec == Exec::Parallel) {
    kernels::threshold_parallel(field.values, grid.cells(), irc.value());
  } else {
    kernels::threshold_serial(field.values, grid.cells(), irc.value());
  }
  return grid;
}

Grid threshold_initial(const RandomField& field, double irc, Exec exec) {
  if (!(irc >= 0.0 && irc <= 1.0)) fail(ErrorCode::InvalidArgument, "irc must lie in [0,1]");
  Grid grid(field.width, field.height);
  if (exec == Exec::Parallel) {
    kernels::threshold_parallel(field.values, grid.cells(), irc);
  } else {
    kernels::threshold_serial(field.values, grid.cells(), irc);
  }
  return grid;
}

Grid ca_step(const Grid& grid, CaRule rule, Exec exec) {
  Grid out(grid.width(), grid.height());
  if (exec == Exec::Parallel) {
    kernels::ca_step_parallel(grid.cells(), out.cells(), grid.width(), grid.height(),
                              rule.blockThreshold);
  } else {
    kernels::ca_step_serial(grid.cells(), out.cells(), grid.width(), grid.height(),
                            rule.blockThreshold);
  }
  return out;
}

Grid generate_from_field(const RandomField& field, Chance irc, int noi, CaRule rule, Exec exec) {
  if (noi < 0) fail(ErrorCode::InvalidArgument, "noi must be >= 0");
  Grid current = threshold_initial(field, irc, exec);
  if (noi == 0) return current;
  Grid next(field.width, field.height);
  for (int i = 0; i < noi; ++i) {
    if (exec == Exec::Parallel) {
      kernels::ca_step_parallel(current.cells(), next.cells(), field.width, field.height,
                                rule.blockThreshold);
    } else {
      kernels::ca_step_serial(current.cells(), next.cells(), field.width, field.height,
                              rule.blockThreshold);
    }
    std::swap(current, next);
  }
  return current;
}

Grid generate(const GenParams& params, Exec exec) {
  params.validate();
  const RandomField field = random_field(params.seed, params.width, params.height);
  return generate_from_field(field, params.irc, params.noi, params.rule, exec);
}

std::string format_irc(Chance irc) {
  const std::int64_t m = irc.micros();
  const std::int64_t whole = m / Chance::kScale;
  const std::int64_t frac = (m < 0 ? -m : m) % Chance::kScale;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", (m < 0 && whole == 0) ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return buf;
}

std::string grid_header(const GenParams& params) {
  std::ostringstream os;
  os << params.width << ' ' << params.height << ' ' << params.seed << ' '
     << format_irc(params.irc) << ' ' << params.noi << ' ' << params.rule.blockThreshold;
  return os.str();
}

std::string grid_rows(const Grid& grid) {
  std::string out;
  out.reserve(grid.size() + static_cast<std::size_t>(grid.height()));
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      out.push_back(grid.at(Cell{x, y}) == Tile::Block ? '#' : '.');
    }
    out.push_back('\n');
  }
  return out;
}

std::string to_text(const Grid& grid, const GenParams& params) {
  return grid_header(params) + "\n" + grid_rows(grid);
}

ParsedGrid parse_grid_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::InvalidArgument, "grid text: missing header");
  std::istringstream hs(header);
  GenParams p;
  double irc = 0.0;
  if (!(hs >> p.width >> p.height >> p.seed >> irc >> p.noi >> p.rule.blockThreshold)) {
    fail(ErrorCode::InvalidArgument, "grid text: malformed header");
  }
  p.irc = Chance::from_double(irc);
  p.validate();
  Grid grid(p.width, p.height);
  std::string row;
  for (int y = 0; y < p.height; ++y) {
    if (!std::getline(in, row) || static_cast<int>(row.size()) != p.width) {
      fail(ErrorCode::InvalidArgument, "grid text: row " + std::to_string(y) + " malformed");
    }
    for (int x = 0; x < p.width; ++x) {
      if (row[x] == '#') {
        grid.set(Cell{x, y}, Tile::Block);
      } else if (row[x] != '.') {
        fail(ErrorCode::InvalidArgument, "grid text: unexpected character");
      }
    }
  }
  return {p, std::move(grid)};
}

}  // namespace tomeria
