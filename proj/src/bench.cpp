#include "planetwars/bench.hpp"

#include <chrono>
#include <thread>

#include "planetwars/engine.hpp"
#include "planetwars/rng.hpp"

namespace planetwars {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kWarmup = 20'000;
constexpr std::uint64_t kClockStride = 1024;

// Runs `op` on `threads` workers until the deadline and the op floor are
// both met. Each worker owns its state; `make_worker` builds one.
template <typename MakeWorker>
BenchResult run_bench(double seconds, int threads, std::uint64_t min_ops, MakeWorker make_worker) {
  threads = std::max(1, threads);
  const std::uint64_t per_thread_min = (min_ops + static_cast<std::uint64_t>(threads) - 1) / static_cast<std::uint64_t>(threads);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(threads), 0);
  std::vector<double> elapsed(static_cast<std::size_t>(threads), 0.0);

  auto body = [&](int t) {
    auto op = make_worker(t);
    for (std::uint64_t i = 0; i < kWarmup; ++i) op();
    const auto begin = Clock::now();
    const auto deadline = begin + std::chrono::duration<double>(seconds);
    std::uint64_t done = 0;
    for (;;) {
      for (std::uint64_t i = 0; i < kClockStride; ++i) op();
      done += kClockStride;
      const auto now = Clock::now();
      if (now >= deadline && done >= per_thread_min) {
        elapsed[static_cast<std::size_t>(t)] = std::chrono::duration<double>(now - begin).count();
        break;
      }
    }
    counts[static_cast<std::size_t>(t)] = done;
  };

  if (threads == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(body, t);
    for (auto& th : pool) th.join();
  }

  BenchResult r;
  r.threads = threads;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    r.operations += counts[t];
    r.seconds = std::max(r.seconds, elapsed[t]);
  }
  r.kops = static_cast<double>(r.operations) / r.seconds / 1000.0;
  return r;
}

}  // namespace

BenchResult bench_next_state(const GameParameters& p, double seconds, int threads, std::uint64_t min_ops) {
  GameParameters endless = p;
  endless.max_ticks = 1 << 30;
  const GameState initial = new_game(endless, 1);
  return run_bench(seconds, threads, min_ops, [&initial](int t) {
    return [s = copy_state(initial), start = copy_state(initial), rng = Rng(mix_seed(42, static_cast<std::uint64_t>(t)))]() mutable {
      const Action a1 = sample_legal_action(s, Owner::Player1, rng);
      const Action a2 = sample_legal_action(s, Owner::Player2, rng);
      advance(s, a1, a2);
      if (s.tick % 64 == 0 && is_terminal(s)) s = start;
    };
  });
}

BenchResult bench_copy(const GameParameters& p, double seconds, int threads, std::uint64_t min_ops) {
  GameState mid = new_game(p, 1);
  Rng rng(7);
  for (int i = 0; i < 300 && !is_terminal(mid); ++i) {
    const Action a1 = sample_legal_action(mid, Owner::Player1, rng);
    const Action a2 = sample_legal_action(mid, Owner::Player2, rng);
    advance(mid, a1, a2);
  }
  return run_bench(seconds, threads, min_ops, [&mid](int) {
    return [&mid, sink = std::uint64_t{0}]() mutable {
      GameState c = copy_state(mid);
      sink += static_cast<std::uint64_t>(c.tick);
      asm volatile("" : : "g"(&c), "g"(sink) : "memory");
    };
  });
}

BenchResult bench_gravity(const GameParameters& p, double seconds, std::uint64_t min_ops) {
  const GameState s = new_game(p, 1);
  using namespace std::chrono;
  const auto begin = Clock::now();
  const auto deadline = begin + duration<double>(seconds);
  BenchResult r;
  do {
    GravityField f = compute_gravity_field(s.planets, p);
    asm volatile("" : : "g"(&f) : "memory");
    ++r.operations;
  } while (Clock::now() < deadline || r.operations < min_ops);
  r.seconds = duration<double>(Clock::now() - begin).count();
  r.kops = static_cast<double>(r.operations) / r.seconds / 1000.0;
  return r;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace planetwars
