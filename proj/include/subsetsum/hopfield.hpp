#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subsetsum/common.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/qubo.hpp"
#include "subsetsum/rng.hpp"

namespace subsetsum {

enum class FlipPolicy {
  // Flip the bit minimizing the new squared residual; strictly decreasing by
  // construction, stops at a local minimum.
  kSteepest,
  // Algorithm-1 literal rule: i = argmin_i grad_i with grad = x*(sigma-T),
  // update s_i <- sign(-grad_i). A no-op update counts as convergence.
  kPaperArgmin,
};

enum class TieBreak { kRandomAmongTies, kLowestIndex };

struct DescentConfig {
  FlipPolicy policy = FlipPolicy::kSteepest;
  double init_density = 0.5;
  std::size_t max_flips = 0;  // 0 => 64 * n
  TieBreak tie_break = TieBreak::kRandomAmongTies;
};

struct RestartOutcome {
  std::uint64_t index = 0;
  std::int64_t abs_residual = 0;
  std::uint64_t flips = 0;
  bool solved = false;
};

struct MultistartConfig {
  std::uint64_t max_restarts = 1'000'000;
  std::uint64_t batch = 10'000;
  std::size_t workers = 0;  // 0 => hardware concurrency
  std::uint64_t seed = 0;
  bool early_stop = true;
  std::optional<double> time_limit_s;
  bool collect_all = false;
  std::size_t cap = 16;
  // Test instrumentation: called once per completed restart (any thread).
  std::function<void(const RestartOutcome&)> on_restart;
};

struct FoundSolution {
  std::vector<std::size_t> indices;
  std::vector<Amount> values;
};

struct SolveReport {
  std::vector<FoundSolution> solutions;
  std::uint64_t restarts_used = 0;
  std::uint64_t flips_total = 0;
  std::uint64_t distinct_optima = 0;
  std::uint64_t verified_count = 0;
  double wall_time_s = 0.0;
  std::string engine;
  std::uint64_t seed = 0;

  bool solved() const { return !solutions.empty(); }
};

struct DescentResult {
  SelectionMask state;
  std::uint64_t flips = 0;
  std::int64_t residual = 0;
};

/// Each spin +1 with probability density. Throws BadConfig unless 0<density<1.
SpinState init_state(std::size_t n, double density, SplitMix64& rng);

/// One greedy flip decision given the current exact residual r. Returns the
/// chosen index or nothing when the policy has converged.
std::optional<std::size_t> best_flip(const SelectionMask& z, std::int64_t r,
                                     const std::vector<Amount>& x, FlipPolicy policy,
                                     TieBreak tie_break, SplitMix64& rng);

DescentResult descend(const SubsetSumInstance& instance, const SpinState& start,
                      const DescentConfig& cfg, SplitMix64& rng);

/// Parallel random-restart driver. Restart j draws its stream from
/// derive_seed(seed, j), so outcomes are invariant to worker count and
/// batching. Never throws on failure: an empty report is the no-solution
/// result.
SolveReport multistart(const SubsetSumInstance& instance, const DescentConfig& dcfg,
                       const MultistartConfig& mcfg);

// Dense reference path (n <= 64): materializes W = -P/2 and theta = (P1-p)/2
// on a x2 integer grid, computes grad = -W s + theta, and applies the literal
// Algorithm-1 update at the argmin index.
struct HopfieldParams {
  std::vector<Amount> x;
  Amount t = 0;
};

std::vector<WideInt> dense_gradient(const HopfieldParams& params, const SpinState& s);
SpinState dense_reference_step(const HopfieldParams& params, const SpinState& s);

}  // namespace subsetsum
