#include "subsetsum/common.hpp"

#include <algorithm>

namespace subsetsum {

std::string to_string_wide(WideInt v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // Negate digit by digit so WideInt's own minimum survives.
  std::string digits;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    if (d < 0) d = -d;
    digits.push_back(static_cast<char>('0' + d));
    v /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

SpinState mask_to_spins(const SelectionMask& z) {
  SpinState s(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) s[i] = z[i] ? 1 : -1;
  return s;
}

SelectionMask spins_to_mask(const SpinState& s) {
  SelectionMask z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) z[i] = s[i] > 0 ? 1 : 0;
  return z;
}

std::vector<std::size_t> mask_indices(const SelectionMask& z) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i]) out.push_back(i);
  return out;
}

SelectionMask mask_from_indices(std::size_t n, const std::vector<std::size_t>& indices) {
  SelectionMask z(n, 0);
  for (auto i : indices) {
    if (i >= n) throw Error(Errc::DimensionMismatch, "index " + std::to_string(i) + " out of range");
    z[i] = 1;
  }
  return z;
}

}  // namespace subsetsum
