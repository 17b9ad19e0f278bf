#include "subsetsum/hopfield.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace subsetsum {

namespace {

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

std::size_t default_workers() {
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

SpinState init_state(std::size_t n, double density, SplitMix64& rng) {
  if (!(density > 0.0 && density < 1.0))
    throw Error(Errc::BadConfig, "init density must lie strictly between 0 and 1");
  SpinState s(n);
  for (auto& si : s) si = rand_unit(rng) < density ? 1 : -1;
  return s;
}

std::optional<std::size_t> best_flip(const SelectionMask& z, std::int64_t r,
                                     const std::vector<Amount>& x, FlipPolicy policy,
                                     TieBreak tie_break, SplitMix64& rng) {
  const std::size_t n = x.size();
  if (z.size() != n) throw Error(Errc::DimensionMismatch, "state length does not match x");

  if (policy == FlipPolicy::kSteepest) {
    const std::int64_t current = abs64(r);
    std::int64_t best_abs = current;
    std::optional<std::size_t> best;
    std::uint64_t ties = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t next = z[i] ? r - x[i] : r + x[i];
      const std::int64_t a = abs64(next);
      if (a >= current) continue;  // only strict improvements
      if (!best || a < best_abs) {
        best = i;
        best_abs = a;
        ties = 1;
      } else if (a == best_abs) {
        ++ties;
        if (tie_break == TieBreak::kRandomAmongTies && rand_below(rng, ties) == 0) best = i;
      }
    }
    return best;
  }

  // Paper-argmin: pick i minimizing grad_i = x_i * r, then s_i <- sign(-grad_i).
  WideInt best_grad = 0;
  std::optional<std::size_t> best;
  std::uint64_t ties = 0;
  const auto rw = static_cast<WideInt>(r);
  for (std::size_t i = 0; i < n; ++i) {
    const WideInt g = static_cast<WideInt>(x[i]) * rw;
    if (!best || g < best_grad) {
      best = i;
      best_grad = g;
      ties = 1;
    } else if (g == best_grad) {
      ++ties;
      if (tie_break == TieBreak::kRandomAmongTies && rand_below(rng, ties) == 0) best = i;
    }
  }
  if (!best) return std::nullopt;
  if (best_grad == 0) return std::nullopt;  // sign(0): spin retained, no-op
  const int new_spin = best_grad < 0 ? 1 : -1;
  const int cur_spin = z[*best] ? 1 : -1;
  if (new_spin == cur_spin) return std::nullopt;  // no-op update counts as convergence
  return best;
}

DescentResult descend(const SubsetSumInstance& instance, const SpinState& start,
                      const DescentConfig& cfg, SplitMix64& rng) {
  const std::size_t n = instance.n();
  if (start.size() != n) throw Error(Errc::DimensionMismatch, "start state length != n");

  DescentResult res;
  res.state = spins_to_mask(start);
  std::int64_t r = residual(instance, res.state);
  const std::uint64_t max_flips = cfg.max_flips ? cfg.max_flips : 64 * static_cast<std::uint64_t>(n);

  while (res.flips < max_flips) {
    const auto pick = best_flip(res.state, r, instance.values, cfg.policy, cfg.tie_break, rng);
    if (!pick) break;
    const std::size_t i = *pick;
    r = res.state[i] ? r - instance.values[i] : r + instance.values[i];
    res.state[i] ^= 1;
    ++res.flips;
    if (r == 0 && cfg.policy == FlipPolicy::kSteepest) break;  // fixed point
  }
  res.residual = r;
  return res;
}

namespace {

// Per-worker accumulator. Terminal states are deduplicated at the best
// |residual| seen, keeping the lexicographically smallest keep_cap states so
// the merged result is invariant to worker count.
struct WorkerState {
  std::int64_t best_abs = std::numeric_limits<std::int64_t>::max();
  std::set<SelectionMask> states;
  std::uint64_t flips = 0;
  std::uint64_t restarts = 0;

  void record(const SelectionMask& state, std::int64_t abs_res, std::size_t keep_cap) {
    if (abs_res > best_abs) return;
    if (abs_res < best_abs) {
      best_abs = abs_res;
      states.clear();
    }
    states.insert(state);
    if (states.size() > keep_cap) states.erase(std::prev(states.end()));
  }
};

}  // namespace

SolveReport multistart(const SubsetSumInstance& instance, const DescentConfig& dcfg,
                       const MultistartConfig& mcfg) {
  if (mcfg.batch == 0) throw Error(Errc::BadConfig, "batch must be >= 1");
  if (mcfg.collect_all && mcfg.cap == 0)
    throw Error(Errc::BadConfig, "cap must be >= 1 when collecting all solutions");

  const std::size_t n = instance.n();
  const std::uint64_t batch = std::min(mcfg.batch, std::max<std::uint64_t>(mcfg.max_restarts, 1));
  const std::size_t workers =
      std::max<std::size_t>(1, mcfg.workers ? mcfg.workers : default_workers());
  const std::size_t keep_cap = std::max<std::size_t>(mcfg.cap, 1024);

  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::uint64_t> next_batch{0};
  std::atomic<bool> stop{false};
  std::vector<WorkerState> locals(workers);
  std::mutex hook_mutex;

  // Early stop fires at the first verified solution, or once cap distinct
  // verified solutions have been seen when collecting.
  const std::size_t stop_after = mcfg.collect_all ? mcfg.cap : 1;
  std::set<SelectionMask> verified_seen;
  std::mutex verified_mutex;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  auto run_worker = [&](std::size_t w) {
    WorkerState& local = locals[w];
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) break;
      const std::uint64_t b = next_batch.fetch_add(1, std::memory_order_relaxed);
      const std::uint64_t lo = b * batch;
      if (lo >= mcfg.max_restarts) break;
      const std::uint64_t hi = std::min(lo + batch, mcfg.max_restarts);
      for (std::uint64_t j = lo; j < hi; ++j) {
        if (stop.load(std::memory_order_relaxed)) break;
        SplitMix64 rng(derive_seed(mcfg.seed, j));
        const auto start = init_state(n, dcfg.init_density, rng);
        const auto res = descend(instance, start, dcfg, rng);
        ++local.restarts;
        local.flips += res.flips;
        const std::int64_t a = abs64(res.residual);
        local.record(res.state, a, keep_cap);
        const bool solved = a == 0 && verify(instance, res.state, /*allow_empty=*/false);
        if (mcfg.on_restart) {
          std::lock_guard<std::mutex> lock(hook_mutex);
          mcfg.on_restart(RestartOutcome{j, a, res.flips, solved});
        }
        if (solved && mcfg.early_stop) {
          std::lock_guard<std::mutex> lock(verified_mutex);
          verified_seen.insert(res.state);
          if (verified_seen.size() >= stop_after) {
            stop.store(true, std::memory_order_relaxed);
            break;
          }
        }
        if (mcfg.time_limit_s && elapsed() > *mcfg.time_limit_s) {
          stop.store(true, std::memory_order_relaxed);
          break;
        }
      }
    }
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
    for (auto& t : pool) t.join();
  }

  // Merge: global best |residual|, union of kept states, re-capped.
  WorkerState merged;
  for (auto& local : locals) {
    merged.flips += local.flips;
    merged.restarts += local.restarts;
    if (local.best_abs > merged.best_abs) continue;
    if (local.best_abs < merged.best_abs) {
      merged.best_abs = local.best_abs;
      merged.states.clear();
    }
    for (auto& st : local.states) {
      merged.states.insert(st);
      if (merged.states.size() > keep_cap) merged.states.erase(std::prev(merged.states.end()));
    }
  }

  SolveReport report;
  report.engine = "hopfield";
  report.seed = mcfg.seed;
  report.restarts_used = merged.restarts;
  report.flips_total = merged.flips;
  report.distinct_optima = merged.states.size();

  const std::size_t solution_cap = mcfg.collect_all ? mcfg.cap : 1;
  if (merged.best_abs == 0) {
    for (const auto& st : merged.states) {
      if (!verify(instance, st, /*allow_empty=*/false)) continue;
      ++report.verified_count;
      if (report.solutions.size() < solution_cap) {
        FoundSolution sol;
        sol.indices = mask_indices(st);
        for (auto i : sol.indices) sol.values.push_back(instance.values[i]);
        report.solutions.push_back(std::move(sol));
      }
    }
  }
  report.wall_time_s = elapsed();
  return report;
}

std::vector<WideInt> dense_gradient(const HopfieldParams& params, const SpinState& s) {
  const std::size_t n = params.x.size();
  if (s.size() != n) throw Error(Errc::DimensionMismatch, "state length != n");
  if (n > 64) throw Error(Errc::InstanceTooLarge, "dense reference path is limited to n <= 64");

  // grad = -W s + theta on a x2 grid: 2*grad_i = sum_j P_ij s_j + (P1 - p)_i.
  std::vector<WideInt> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    WideInt acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const WideInt pij = static_cast<WideInt>(params.x[i]) * params.x[j];
      acc += s[j] > 0 ? pij : -pij;
      acc += pij;
    }
    acc -= static_cast<WideInt>(2) * params.t * params.x[i];
    // Always even: equals 2 * x_i * (sigma - T).
    grad[i] = acc / 2;
  }
  return grad;
}

SpinState dense_reference_step(const HopfieldParams& params, const SpinState& s) {
  const auto grad = dense_gradient(params, s);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grad.size(); ++i)
    if (grad[i] < grad[best]) best = i;
  SpinState out = s;
  if (grad[best] != 0)  // sign(0): retain
    out[best] = grad[best] < 0 ? 1 : -1;
  return out;
}

}  // namespace subsetsum
