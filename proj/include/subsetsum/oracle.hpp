#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subsetsum/common.hpp"
#include "subsetsum/model.hpp"

namespace subsetsum {

inline constexpr std::size_t kBruteForceMaxN = 24;
inline constexpr std::size_t kMeetInMiddleMaxN = 40;
inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::size_t kDefaultDpMemoryCap = std::size_t{1} << 30;  // 1 GiB

struct EnumerationResult {
  std::vector<SelectionMask> masks;  // canonically sorted, each verified
  bool exhausted = false;
  bool cap_hit = false;
};

/// Exhaustive enumeration (n <= 24) with suffix-bound pruning. The empty
/// subset is excluded unless include_empty.
EnumerationResult brute_force(const SubsetSumInstance& instance, bool stop_at_first = false,
                              std::size_t cap = kDefaultEnumerationCap, bool include_empty = false);

/// Half-split enumeration (n <= 40); result set identical to brute_force
/// where both apply.
EnumerationResult meet_in_middle(const SubsetSumInstance& instance,
                                 std::size_t cap = kDefaultEnumerationCap,
                                 bool include_empty = false);

struct DpDecision {
  bool feasible = false;
  std::optional<SelectionMask> witness;
};

/// Pseudo-polynomial feasibility over the offset range
/// [n*min(0,x_min), n*max(0,x_max)], witness reconstructed by backtracking.
/// Throws RangeTooLarge when the n-row bitset would exceed memory_cap bytes.
DpDecision dp_decide(const SubsetSumInstance& instance,
                     std::size_t memory_cap = kDefaultDpMemoryCap);

/// Exact solution count via the meet-in-the-middle join, without
/// materializing masks (n <= 40).
std::uint64_t count_solutions(const SubsetSumInstance& instance, bool include_empty = false);

}  // namespace subsetsum
