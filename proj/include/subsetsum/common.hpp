#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsetsum {

// Monetary amount in minor units (cents). Signed 64-bit with a magnitude cap
// chosen so that any subset sum of up to kMaxValues amounts fits in int64:
// 4096 * 2^50 = 2^62.
using Amount = std::int64_t;

inline constexpr Amount kMaxAmountMagnitude = Amount{1} << 50;
inline constexpr std::size_t kMaxValues = 4096;

// Energies and squared residuals need up to ~125 bits: |r| <= 2^62 + 2^50,
// r^2 < 2^125.
using WideInt = __int128;

std::string to_string_wide(WideInt v);

// Binary indicator vector z (one byte per index, 0/1).
using SelectionMask = std::vector<std::uint8_t>;
// Bipolar state s in {-1,+1}^n, bijective with SelectionMask via z=(s+1)/2.
using SpinState = std::vector<std::int8_t>;

SpinState mask_to_spins(const SelectionMask& z);
SelectionMask spins_to_mask(const SpinState& s);
std::vector<std::size_t> mask_indices(const SelectionMask& z);
SelectionMask mask_from_indices(std::size_t n, const std::vector<std::size_t>& indices);

enum class Errc {
  EmptyValues,
  MagnitudeOverflow,
  TooManyValues,
  ParseError,
  DimensionMismatch,
  InstanceTooLarge,
  RangeTooLarge,
  ScopeTooSmall,
  BadReference,
  BadConfig,
  IoError,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

}  // namespace subsetsum
