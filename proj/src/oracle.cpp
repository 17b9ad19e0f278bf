#include "subsetsum/oracle.hpp"

#include <algorithm>
#include <cstdint>

#include <boost/dynamic_bitset.hpp>

#include "subsetsum/qubo.hpp"

namespace subsetsum {

namespace {

struct Enumerator {
  const std::vector<Amount>& x;
  Amount target;
  std::size_t cap;
  bool include_empty;
  bool stop_at_first;

  // Suffix bounds over the remaining items: every completion of a partial sum
  // sigma lies in [sigma + suffix_neg[d], sigma + suffix_pos[d]].
  std::vector<std::int64_t> suffix_neg, suffix_pos;
  SelectionMask current;
  std::vector<SelectionMask> found;
  bool aborted = false;

  explicit Enumerator(const SubsetSumInstance& inst, std::size_t cap_, bool include_empty_,
                      bool stop_at_first_)
      : x(inst.values),
        target(inst.target),
        cap(cap_),
        include_empty(include_empty_),
        stop_at_first(stop_at_first_) {
    const std::size_t n = x.size();
    suffix_neg.assign(n + 1, 0);
    suffix_pos.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
      suffix_neg[i] = suffix_neg[i + 1] + std::min<Amount>(0, x[i]);
      suffix_pos[i] = suffix_pos[i + 1] + std::max<Amount>(0, x[i]);
    }
    current.assign(n, 0);
  }

  bool done() const { return aborted || (stop_at_first && !found.empty()); }

  void recurse(std::size_t d, std::int64_t sigma) {
    if (done()) return;
    if (target < sigma + suffix_neg[d] || target > sigma + suffix_pos[d]) return;
    if (d == x.size()) {
      if (sigma != target) return;
      bool nonempty = false;
      for (auto b : current)
        if (b) {
          nonempty = true;
          break;
        }
      if (!nonempty && !include_empty) return;
      if (found.size() == cap) {
        aborted = true;
        return;
      }
      found.push_back(current);
      return;
    }
    recurse(d + 1, sigma);
    if (done()) return;
    current[d] = 1;
    recurse(d + 1, sigma + x[d]);
    current[d] = 0;
  }
};

std::vector<std::int64_t> half_sums(const std::vector<Amount>& x, std::size_t lo, std::size_t hi) {
  const std::size_t h = hi - lo;
  std::vector<std::int64_t> sums(std::size_t{1} << h, 0);
  for (std::size_t bits = 1; bits < sums.size(); ++bits) {
    const unsigned low = static_cast<unsigned>(__builtin_ctzll(bits));
    sums[bits] = sums[bits & (bits - 1)] + x[lo + low];
  }
  return sums;
}

}  // namespace

EnumerationResult brute_force(const SubsetSumInstance& instance, bool stop_at_first,
                              std::size_t cap, bool include_empty) {
  if (instance.n() > kBruteForceMaxN)
    throw Error(Errc::InstanceTooLarge,
                "brute force is limited to n <= " + std::to_string(kBruteForceMaxN));
  if (cap == 0) throw Error(Errc::BadConfig, "cap must be >= 1");

  Enumerator e(instance, cap, include_empty, stop_at_first);
  e.recurse(0, 0);

  EnumerationResult out;
  out.masks = std::move(e.found);
  std::sort(out.masks.begin(), out.masks.end());
  out.cap_hit = e.aborted;
  out.exhausted = !e.aborted && !(stop_at_first && !out.masks.empty());
  return out;
}

EnumerationResult meet_in_middle(const SubsetSumInstance& instance, std::size_t cap,
                                 bool include_empty) {
  const std::size_t n = instance.n();
  if (n > kMeetInMiddleMaxN)
    throw Error(Errc::InstanceTooLarge,
                "meet-in-the-middle is limited to n <= " + std::to_string(kMeetInMiddleMaxN));
  if (cap == 0) throw Error(Errc::BadConfig, "cap must be >= 1");

  const std::size_t h = n / 2;
  const auto& x = instance.values;
  const auto a_sums = half_sums(x, 0, h);
  const auto b_sums = half_sums(x, h, n);

  // Sort the B half by sum, keep the bits for reconstruction.
  std::vector<std::pair<std::int64_t, std::uint64_t>> b_sorted(b_sums.size());
  for (std::size_t bits = 0; bits < b_sums.size(); ++bits) b_sorted[bits] = {b_sums[bits], bits};
  std::sort(b_sorted.begin(), b_sorted.end());

  EnumerationResult out;
  bool aborted = false;
  for (std::size_t a_bits = 0; a_bits < a_sums.size() && !aborted; ++a_bits) {
    const std::int64_t want = instance.target - a_sums[a_bits];
    auto range = std::equal_range(
        b_sorted.begin(), b_sorted.end(), std::make_pair(want, std::uint64_t{0}),
        [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    for (auto it = range.first; it != range.second; ++it) {
      const std::uint64_t b_bits = it->second;
      if (a_bits == 0 && b_bits == 0 && !include_empty) continue;
      if (out.masks.size() == cap) {
        aborted = true;
        break;
      }
      SelectionMask mask(n, 0);
      for (std::size_t i = 0; i < h; ++i)
        if (a_bits >> i & 1) mask[i] = 1;
      for (std::size_t i = h; i < n; ++i)
        if (b_bits >> (i - h) & 1) mask[i] = 1;
      out.masks.push_back(std::move(mask));
    }
  }
  std::sort(out.masks.begin(), out.masks.end());
  out.cap_hit = aborted;
  out.exhausted = !aborted;
  return out;
}

std::uint64_t count_solutions(const SubsetSumInstance& instance, bool include_empty) {
  const std::size_t n = instance.n();
  if (n > kMeetInMiddleMaxN)
    throw Error(Errc::InstanceTooLarge,
                "solution counting is limited to n <= " + std::to_string(kMeetInMiddleMaxN));

  const std::size_t h = n / 2;
  const auto a_sums = half_sums(instance.values, 0, h);
  auto b_sums = half_sums(instance.values, h, n);
  std::sort(b_sums.begin(), b_sums.end());

  std::uint64_t count = 0;
  for (const auto a : a_sums) {
    const std::int64_t want = instance.target - a;
    const auto range = std::equal_range(b_sums.begin(), b_sums.end(), want);
    count += static_cast<std::uint64_t>(range.second - range.first);
  }
  if (!include_empty && instance.target == 0) --count;  // the empty-empty pair
  return count;
}

DpDecision dp_decide(const SubsetSumInstance& instance, std::size_t memory_cap) {
  const std::size_t n = instance.n();
  const auto& x = instance.values;

  std::int64_t sum_neg = 0, sum_pos = 0;
  for (auto v : x) (v < 0 ? sum_neg : sum_pos) += v;

  DpDecision out;
  if (instance.target < sum_neg || instance.target > sum_pos) return out;

  const auto range_bits = static_cast<std::uint64_t>(sum_pos - sum_neg) + 1;
  const auto total_bytes =
      (static_cast<std::uint64_t>(n) + 1) * ((range_bits + 7) / 8);
  if (total_bytes > memory_cap)
    throw Error(Errc::RangeTooLarge,
                "dp table of " + std::to_string(total_bytes) + " bytes exceeds the memory cap");

  const std::uint64_t zero_off = static_cast<std::uint64_t>(-sum_neg);
  using Bitset = boost::dynamic_bitset<std::uint64_t>;

  // snapshots[i]: sums reachable by nonempty subsets of the first i values.
  std::vector<Bitset> snapshots;
  snapshots.reserve(n + 1);
  snapshots.emplace_back(range_bits);
  for (std::size_t i = 0; i < n; ++i) {
    Bitset next = snapshots.back();
    if (x[i] >= 0) {
      next |= snapshots.back() << static_cast<std::size_t>(x[i]);
    } else {
      next |= snapshots.back() >> static_cast<std::size_t>(-x[i]);
    }
    next.set(static_cast<std::size_t>(zero_off + static_cast<std::uint64_t>(x[i])));
    snapshots.push_back(std::move(next));
  }

  const auto t_off = static_cast<std::uint64_t>(instance.target - sum_neg);
  if (!snapshots[n].test(static_cast<std::size_t>(t_off))) return out;

  // Backtrack, preferring to skip items.
  out.feasible = true;
  SelectionMask witness(n, 0);
  std::int64_t t = instance.target;
  for (std::size_t i = n; i-- > 0;) {
    const auto off = static_cast<std::uint64_t>(t - sum_neg);
    if (snapshots[i].test(static_cast<std::size_t>(off))) continue;
    if (t == x[i]) {
      witness[i] = 1;
      t = 0;
      break;
    }
    witness[i] = 1;
    t -= x[i];
  }
  if (residual(instance, witness) != 0)
    throw Error(Errc::BadConfig, "dp witness reconstruction failed");  // unreachable
  out.witness = std::move(witness);
  return out;
}

}  // namespace subsetsum
