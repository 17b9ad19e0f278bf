#include "subsetsum/bench.hpp"

#include <chrono>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "subsetsum/oracle.hpp"
#include "subsetsum/qubo.hpp"

namespace subsetsum {

namespace {

using ordered_json = nlohmann::ordered_json;

SolveReport report_from_masks(const SubsetSumInstance& instance,
                              const std::vector<SelectionMask>& masks, const char* engine,
                              std::size_t cap) {
  SolveReport report;
  report.engine = engine;
  report.distinct_optima = masks.size();
  report.verified_count = masks.size();
  for (const auto& mask : masks) {
    if (report.solutions.size() == cap) break;
    FoundSolution sol;
    sol.indices = mask_indices(mask);
    for (auto i : sol.indices) sol.values.push_back(instance.values[i]);
    report.solutions.push_back(std::move(sol));
  }
  return report;
}

}  // namespace

Engine engine_from_name(const std::string& name) {
  if (name == "hopfield") return Engine::kHopfield;
  if (name == "evolve") return Engine::kEvolve;
  if (name == "brute") return Engine::kBrute;
  if (name == "dp") return Engine::kDp;
  if (name == "mitm") return Engine::kMitm;
  throw Error(Errc::BadConfig, "unknown engine \"" + name + "\"");
}

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::kHopfield: return "hopfield";
    case Engine::kEvolve: return "evolve";
    case Engine::kBrute: return "brute";
    case Engine::kDp: return "dp";
    case Engine::kMitm: return "mitm";
  }
  return "?";
}

SolveReport solve_instance(const SubsetSumInstance& instance, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;

  switch (opts.engine) {
    case Engine::kHopfield: {
      MultistartConfig mcfg = opts.multistart;
      mcfg.collect_all = opts.collect_all;
      if (opts.collect_all) mcfg.cap = opts.cap;
      report = multistart(instance, opts.descent, mcfg);
      break;
    }
    case Engine::kEvolve: {
      EvolveConfig ecfg = opts.evolve;
      if (opts.collect_all) {
        ecfg.cap = opts.cap;
        ecfg.early_stop = false;
      }
      report = evolve(instance, ecfg, FitnessMode::exact());
      break;
    }
    case Engine::kBrute: {
      const auto res = brute_force(instance, /*stop_at_first=*/!opts.collect_all,
                                   opts.collect_all ? opts.cap : kDefaultEnumerationCap);
      report = report_from_masks(instance, res.masks, "brute", opts.collect_all ? opts.cap : 1);
      break;
    }
    case Engine::kMitm: {
      const auto res = meet_in_middle(instance, opts.collect_all ? opts.cap : 1);
      report = report_from_masks(instance, res.masks, "mitm", opts.collect_all ? opts.cap : 1);
      break;
    }
    case Engine::kDp: {
      const auto res = dp_decide(instance);
      std::vector<SelectionMask> masks;
      if (res.feasible) masks.push_back(*res.witness);
      report = report_from_masks(instance, masks, "dp", 1);
      break;
    }
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (opts.no_timing) report.wall_time_s = 0.0;
  return report;
}

std::vector<BenchRow> run_benchmark(const std::vector<GeneratorConfig>& grid,
                                    const SolverOptions& opts) {
  std::vector<BenchRow> rows;
  for (const auto& cfg : grid) {
    validate_config(cfg);
    BenchRow row;
    row.n = cfg.n;
    row.x_max = cfg.x_max;
    row.k = cfg.k;
    row.samples = cfg.samples;
    row.engine = engine_name(opts.engine);

    double restarts_sum = 0.0;
    double time_sum = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const auto instance = generate(cfg, i);
      auto sopts = opts;
      sopts.multistart.seed = derive_seed(cfg.seed, 1'000'000 + i);
      sopts.evolve.seed = sopts.multistart.seed;
      const auto report = solve_instance(instance, sopts);
      if (report.solved()) {
        ++row.solved;
        restarts_sum += static_cast<double>(report.restarts_used);
        time_sum += report.wall_time_s;
      }
    }
    if (row.solved > 0) {
      row.mean_restarts = restarts_sum / static_cast<double>(row.solved);
      row.mean_time_s = opts.no_timing ? 0.0 : time_sum / static_cast<double>(row.solved);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n,x_max,k,samples,solved,mean_restarts,mean_time_s,engine\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%lld,%zu,%zu,%zu,%.1f,%.6f,%s\n", row.n,
                  static_cast<long long>(row.x_max), row.k, row.samples, row.solved,
                  row.mean_restarts, row.mean_time_s, row.engine.c_str());
    out += buf;
  }
  return out;
}

std::string report_to_json(const SolveReport& report) {
  ordered_json doc;
  ordered_json sols = ordered_json::array();
  for (const auto& sol : report.solutions) {
    ordered_json s;
    s["indices"] = sol.indices;
    s["values"] = sol.values;
    sols.push_back(std::move(s));
  }
  doc["solutions"] = std::move(sols);
  doc["restarts_used"] = report.restarts_used;
  doc["flips_total"] = report.flips_total;
  doc["distinct_optima"] = report.distinct_optima;
  doc["verified_count"] = report.verified_count;
  doc["wall_time_s"] = report.wall_time_s;
  doc["engine"] = report.engine;
  doc["seed"] = report.seed;
  return doc.dump(2) + "\n";
}

std::vector<GeneratorConfig> read_grid(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("grid document: ") + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::ParseError, "grid document: top level must be an array");

  std::vector<GeneratorConfig> grid;
  for (const auto& entry : doc) {
    if (!entry.is_object()) throw Error(Errc::ParseError, "grid entries must be objects");
    GeneratorConfig cfg;
    for (const auto& [key, value] : entry.items()) {
      if (key == "n") cfg.n = value.get<std::size_t>();
      else if (key == "k") cfg.k = value.get<std::size_t>();
      else if (key == "x_min") cfg.x_min = value.get<Amount>();
      else if (key == "x_max") cfg.x_max = value.get<Amount>();
      else if (key == "samples") cfg.samples = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw Error(Errc::ParseError, "grid document: unknown field \"" + key + "\"");
    }
    validate_config(cfg);
    grid.push_back(cfg);
  }
  return grid;
}

}  // namespace subsetsum
