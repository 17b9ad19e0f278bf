#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsetsum/anneal.hpp"
#include "subsetsum/hopfield.hpp"
#include "subsetsum/model.hpp"

namespace subsetsum {

struct BenchRow {
  std::size_t n = 0;
  Amount x_max = 0;
  std::size_t k = 0;
  std::size_t samples = 0;
  std::size_t solved = 0;
  double mean_restarts = 0.0;  // over solved samples only
  double mean_time_s = 0.0;
  std::string engine;
};

enum class Engine { kHopfield, kEvolve, kBrute, kDp, kMitm };

Engine engine_from_name(const std::string& name);
std::string engine_name(Engine e);

struct SolverOptions {
  Engine engine = Engine::kHopfield;
  DescentConfig descent;
  MultistartConfig multistart;
  EvolveConfig evolve;
  bool collect_all = false;
  std::size_t cap = 16;
  bool no_timing = false;
};

/// One-stop solve used by the CLI and the bench harness.
SolveReport solve_instance(const SubsetSumInstance& instance, const SolverOptions& opts);

std::vector<BenchRow> run_benchmark(const std::vector<GeneratorConfig>& grid,
                                    const SolverOptions& opts);

/// CSV with header n,x_max,k,samples,solved,mean_restarts,mean_time_s,engine.
std::string bench_csv(const std::vector<BenchRow>& rows);

std::string report_to_json(const SolveReport& report);

std::vector<GeneratorConfig> read_grid(const std::string& json_text);

}  // namespace subsetsum
