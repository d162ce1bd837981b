#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <span>

#include "tomeria/grid.hpp"

namespace tomeria {

/// Selects between the serial reference kernels and their OpenMP versions.
/// Both must produce identical results; the serial path is what tests trust.
enum class Exec { Serial, Parallel };

/// Number of worker threads the parallel kernels will use (1 without OpenMP).
int parallel_threads();

namespace kernels {

// Threshold-CA step. out[i] = BLOCK iff the 3x3 BLOCK count around i
// (self included, out-of-bounds counted as BLOCK) >= threshold.
void ca_step_serial(std::span<const Tile> in, std::span<Tile> out, int width, int height,
                    int threshold);
// Row-parallel version using padded sliding column sums.
void ca_step_parallel(std::span<const Tile> in, std::span<Tile> out, int width, int height,
                      int threshold);

void threshold_serial(std::span<const double> field, std::span<Tile> out, double irc);
void threshold_parallel(std::span<const double> field, std::span<Tile> out, double irc);

}  // namespace kernels

/// Runs body(i) for i in [0, n). Callers write results into per-index slots
/// so output order never depends on scheduling. The first exception thrown by
/// any iteration is rethrown after the loop.
template <typename Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  const auto count = static_cast<long long>(n);
#if defined(TOMERIA_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#if defined(TOMERIA_HAVE_OPENMP)
#pragma omp critical(tomeria_for_each_index)
#endif
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace tomeria
