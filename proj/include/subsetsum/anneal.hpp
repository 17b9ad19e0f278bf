#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "subsetsum/common.hpp"
#include "subsetsum/hopfield.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/qubo.hpp"

namespace subsetsum {

struct EvolveConfig {
  std::size_t population = 128;
  std::uint64_t generations = 10'000;
  std::size_t tournament = 2;
  double crossover_rate = 0.5;
  double mutation_rate = 0.0;  // 0 => 1/n
  std::size_t elitism = 2;
  std::uint64_t seed = 0;
  bool early_stop = true;
  std::size_t cap = 16;  // distinct best states kept for the report
  // Test instrumentation: called once per generation with the elite fitness;
  // reseeded flags generations whose population was rebuilt after converging.
  std::function<void(std::uint64_t generation, std::int64_t elite_fitness, bool reseeded)>
      on_generation;
};

// Hardware-precision model of an Ising form: every coefficient is mapped by
// one positive scale onto a 2^-frac_bits fixed-point grid, couplings landing
// in [-2.0, 1.0]. The scale is the exact rational scale_num/scale_den over
// the x4 integer grid; quantization is integer-exact (ties away from zero).
struct QuantizedIsing {
  std::size_t n = 0;
  int frac_bits = 8;
  // Grid units: value * 2^frac_bits. couplings is the full symmetric matrix
  // (row-major, n*n), diagonal included; biases may fall outside [-2,1].
  std::vector<std::int64_t> couplings;
  std::vector<std::int64_t> biases;
  WideInt scale_num = 1;
  WideInt scale_den = 1;
  bool degenerate = false;

  double scale() const {
    return static_cast<double>(scale_num) / static_cast<double>(scale_den);
  }
  std::int64_t coupling(std::size_t i, std::size_t j) const { return couplings[i * n + j]; }
  double coupling_value(std::size_t i, std::size_t j) const {
    return static_cast<double>(coupling(i, j)) / static_cast<double>(std::int64_t{1} << frac_bits);
  }
  double bias_value(std::size_t i) const {
    return static_cast<double>(biases[i]) / static_cast<double>(std::int64_t{1} << frac_bits);
  }
};

struct FixedPoint {
  std::int64_t units = 0;
  int frac_bits = 0;

  double value() const {
    return static_cast<double>(units) / static_cast<double>(std::int64_t{1} << frac_bits);
  }
};

inline constexpr int kMaxFracBits = 24;
inline constexpr std::size_t kMaxQuantizeN = 1024;

/// Normalizes an Ising form as annealer hardware does. frac_bits in [1, 24];
/// n <= 1024 (the matrix is materialized).
QuantizedIsing quantize(const IsingForm& ising, int frac_bits);

/// Same pipeline for an externally supplied model. Pair couplings become the
/// off-diagonal matrix entries; the export's folded diagonal is a constant in
/// s and does not affect minimizers.
QuantizedIsing quantize_exported(const ExportedIsing& model, int frac_bits);

/// s'Qs + q's on the fixed-point grid, exact (integer accumulation).
FixedPoint energy_quantized(const QuantizedIsing& q, const SpinState& s);

enum class FitnessKind { kExactResidual, kQuantized };

struct FitnessMode {
  FitnessKind kind = FitnessKind::kExactResidual;
  int frac_bits = 8;

  static FitnessMode exact() { return {FitnessKind::kExactResidual, 0}; }
  static FitnessMode quantized(int frac_bits) { return {FitnessKind::kQuantized, frac_bits}; }
};

/// Evolutionary digital-annealer loop: tournament selection, uniform
/// crossover, per-bit mutation, elitism; a converged (all-identical)
/// population is reseeded within the same generation budget.
SolveReport evolve(const SubsetSumInstance& instance, const EvolveConfig& ecfg,
                   FitnessMode fitness = FitnessMode::exact());

}  // namespace subsetsum
