#include "tomeria/kernels.hpp"

#include <vector>

#if defined(TOMERIA_HAVE_OPENMP)
#include <omp.h>
#endif

namespace tomeria {

int parallel_threads() {
#if defined(TOMERIA_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

void ca_step_serial(std::span<const Tile> in, std::span<Tile> out, int width, int height,
                    int threshold) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int blocks = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) {
            ++blocks;
          } else if (in[static_cast<std::size_t>(ny) * width + nx] == Tile::Block) {
            ++blocks;
          }
        }
      }
      out[static_cast<std::size_t>(y) * width + x] =
          blocks >= threshold ? Tile::Block : Tile::Open;
    }
  }
}

void ca_step_parallel(std::span<const Tile> in, std::span<Tile> out, int width, int height,
                      int threshold) {
#if defined(TOMERIA_HAVE_OPENMP)
#pragma omp parallel
#endif
  {
    // column[x + 1] holds the vertical 3-cell BLOCK count at column x;
    // the two pad slots stand for the out-of-bounds columns.
    std::vector<int> column(static_cast<std::size_t>(width) + 2);
#if defined(TOMERIA_HAVE_OPENMP)
#pragma omp for schedule(static)
#endif
    for (int y = 0; y < height; ++y) {
      column.front() = 3;
      column.back() = 3;
      for (int x = 0; x < width; ++x) {
        int c = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          const int ny = y + dy;
          c += (ny < 0 || ny >= height)
                   ? 1
                   : static_cast<int>(in[static_cast<std::size_t>(ny) * width + x]);
        }
        column[static_cast<std::size_t>(x) + 1] = c;
      }
      int window = column[0] + column[1] + column[2];
      Tile* row = out.data() + static_cast<std::size_t>(y) * width;
      for (int x = 0; x < width; ++x) {
        row[x] = window >= threshold ? Tile::Block : Tile::Open;
        if (x + 1 < width) window += column[static_cast<std::size_t>(x) + 3] - column[x];
      }
    }
  }
}

void threshold_serial(std::span<const double> field, std::span<Tile> out, double irc) {
  for (std::size_t i = 0; i < field.size(); ++i) {
    out[i] = field[i] < irc ? Tile::Block : Tile::Open;
  }
}

void threshold_parallel(std::span<const double> field, std::span<Tile> out, double irc) {
  const auto n = static_cast<long long>(field.size());
#if defined(TOMERIA_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = field[static_cast<std::size_t>(i)] < irc ? Tile::Block : Tile::Open;
  }
}

}  // namespace kernels
}  // namespace tomeria
