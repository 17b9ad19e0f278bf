#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsetsum/common.hpp"
#include "subsetsum/model.hpp"

namespace subsetsum {

// Rank-one QUBO E(z) = z'Pz - p'z with P = x x', p = 2Tx. P and p are never
// materialized outside tests: E(z) = (sigma - T)^2 - T^2 with sigma = x'z,
// which is exact in 128-bit and O(n) to evaluate.
struct QuboForm {
  std::vector<Amount> x;
  Amount t = 0;
  WideInt offset = 0;  // -T^2, the constant dropped between E(z) and (sigma-T)^2

  std::size_t n() const { return x.size(); }
};

// Ising equivalent over s in {-1,+1}^n: E(s) = s'Qs + q's with Q = P/4 and
// q = (P1 - p)/2. Coefficients are stored scaled by 4 so they stay integral:
// (4Q)_ij = x_i x_j, (4q)_i = 2 x_i (S - 2T) with S = sum(x).
struct IsingForm {
  std::vector<Amount> x;
  Amount t = 0;
  std::int64_t value_sum = 0;  // S

  std::size_t n() const { return x.size(); }

  WideInt coupling_x4(std::size_t i, std::size_t j) const {
    return static_cast<WideInt>(x[i]) * x[j];
  }
  WideInt linear_x4(std::size_t i) const {
    return static_cast<WideInt>(2) * x[i] * (static_cast<WideInt>(value_sum) - 2 * static_cast<WideInt>(t));
  }
  // E_qubo(z) = E_ising(s(z)) + const_shift; stored x4 it is S^2 - 4TS.
  WideInt const_shift_x4() const {
    const auto s = static_cast<WideInt>(value_sum);
    return s * s - 4 * static_cast<WideInt>(t) * s;
  }
};

QuboForm build_qubo(const SubsetSumInstance& instance);
IsingForm qubo_to_ising(const QuboForm& form);

std::int64_t subset_sum(const std::vector<Amount>& values, const SelectionMask& z);

/// sigma - T; zero iff z solves the instance.
std::int64_t residual(const SubsetSumInstance& instance, const SelectionMask& z);

/// (sigma - T)^2 - T^2, exact.
WideInt energy_qubo(const QuboForm& form, const SelectionMask& z);
WideInt energy_qubo(const SubsetSumInstance& instance, const SelectionMask& z);

/// 4 * E_ising(s) = u^2 + 2(S-2T)u with u = x's, exact.
WideInt energy_ising_x4(const IsingForm& form, const SpinState& s);

/// True iff residual is zero and the mask is nonempty (or allow_empty).
bool verify(const SubsetSumInstance& instance, const SelectionMask& z, bool allow_empty = false);

// Dense reference paths, test/reference use only (n <= 64).
std::vector<std::vector<WideInt>> dense_p(const QuboForm& form);
std::vector<WideInt> dense_p_linear(const QuboForm& form);
WideInt energy_qubo_dense(const QuboForm& form, const SelectionMask& z);

/// Ising model export for external annealing tools. Pair-coupling convention:
/// quadratic holds [i, j, P_ij + P_ji] for i < j on the x4 grid, linear holds
/// 4q, and the spin-invariant diagonal sum(x_i^2) is folded into
/// const_shift_x4 so that
///   E_qubo(z) = ( sum_{i<j} quad_ij s_i s_j + sum_i lin_i s_i + const_shift_x4 ) / 4.
/// Throws MagnitudeOverflow if a coefficient does not fit a 64-bit integer.
std::string export_ising_json(const IsingForm& form);

/// A parsed external Ising model (same schema as export_ising_json).
struct ExportedIsing {
  std::size_t n = 0;
  std::vector<std::int64_t> linear_x4;
  struct Coupling {
    std::size_t i, j;
    std::int64_t value_x4;
  };
  std::vector<Coupling> quadratic_x4;
  std::int64_t const_shift_x4 = 0;
};

ExportedIsing read_ising_json(const std::string& json_text);

}  // namespace subsetsum
