#pragma once

#include <cstdint>
#include <vector>

#include "planetwars/params.hpp"

namespace planetwars {

struct BenchResult {
  double kops = 0.0;  // thousands of operations per wall-clock second
  std::uint64_t operations = 0;
  double seconds = 0.0;
  int threads = 1;
};

inline constexpr std::uint64_t kDefaultMinOps = 1'000'000;

// Each worker advances its own game with random legal actions, restarting
// from a fresh copy of the initial state when the game ends. Timing uses a
// monotonic clock, excludes warm-up, and runs until both `seconds` and
// `min_ops` (summed over workers) are reached.
BenchResult bench_next_state(const GameParameters& p, double seconds, int threads,
                             std::uint64_t min_ops = kDefaultMinOps);
// Copies of a mid-game state.
BenchResult bench_copy(const GameParameters& p, double seconds, int threads,
                       std::uint64_t min_ops = kDefaultMinOps);
// Full gravity field computations; single threaded.
BenchResult bench_gravity(const GameParameters& p, double seconds, std::uint64_t min_ops = 1);

// Least-squares line through (x, y) and its coefficient of determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace planetwars
