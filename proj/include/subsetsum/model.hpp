#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsetsum/common.hpp"
#include "subsetsum/rng.hpp"

namespace subsetsum {

struct Meta {
  std::string seed;
  int decimals = 2;
  std::string source;

  bool empty() const { return seed.empty() && decimals == 2 && source.empty(); }
};

/// A subset-sum instance: ordered values x (indices are stable identifiers),
/// target T, and an optional generator-known solution.
struct SubsetSumInstance {
  std::vector<Amount> values;
  Amount target = 0;
  std::optional<std::vector<std::size_t>> planted;
  Meta meta;

  std::size_t n() const { return values.size(); }
};

struct GeneratorConfig {
  std::size_t n = 16;
  std::size_t k = 4;
  Amount x_min = -10000;
  Amount x_max = 10000;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
};

struct SolutionRatio {
  double r = 0.0;
  std::int64_t interval_lo = 0;
  std::int64_t interval_hi = 0;
};

/// Validates and returns an instance. Throws EmptyValues, MagnitudeOverflow,
/// or TooManyValues.
SubsetSumInstance new_instance(std::vector<Amount> values, Amount target);

/// Samples n values uniformly from [x_min, x_max] (with replacement), picks k
/// planted indices without replacement, and sets target to their exact sum.
/// Deterministic given cfg.seed; sample_index selects one of cfg.samples
/// independent instances from the same config.
SubsetSumInstance generate(const GeneratorConfig& cfg, std::size_t sample_index = 0);

/// Expected-solution-count ratio 2^n / (n*(x_max-x_min)) together with the
/// uniform bounds on reachable subset sums.
SolutionRatio solution_ratio(std::size_t n, Amount x_min, Amount x_max);

/// Problem document I/O (JSON, UTF-8). Unknown fields are rejected.
SubsetSumInstance read_problem(const std::string& json_text);
std::string write_problem(const SubsetSumInstance& instance);

SubsetSumInstance read_problem_file(const std::string& path);
void write_problem_file(const SubsetSumInstance& instance, const std::string& path);

void validate_config(const GeneratorConfig& cfg);

}  // namespace subsetsum
