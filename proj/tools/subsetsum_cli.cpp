#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "subsetsum/anneal.hpp"
#include "subsetsum/audit.hpp"
#include "subsetsum/bench.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/oracle.hpp"
#include "subsetsum/qubo.hpp"

namespace {

using subsetsum::Error;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(subsetsum::Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(subsetsum::Errc::IoError, "cannot write " + out_path);
  out << text;
}

struct SolveFlags {
  std::string policy = "steepest";
  double density = 0.5;
  std::uint64_t max_flips = 0;
  std::uint64_t max_restarts = 1'000'000;
  std::uint64_t batch = 10'000;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  bool collect_all = false;
  std::size_t cap = 16;
  bool no_timing = false;
  bool no_early_stop = false;
  double time_limit = 0.0;
  // evolve engine
  std::size_t population = 128;
  std::uint64_t generations = 10'000;
  std::size_t tournament = 2;
  double crossover_rate = 0.5;
  double mutation_rate = 0.0;
  std::size_t elitism = 2;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--policy", f.policy, "Flip policy: steepest or paper-argmin")
      ->check(CLI::IsMember({"steepest", "paper-argmin"}));
  cmd->add_option("--density", f.density, "Initial +1 density (default 0.5)");
  cmd->add_option("--max-flips", f.max_flips, "Flip cap per restart (default 64*n)");
  cmd->add_option("--max-restarts,-R", f.max_restarts, "Restart budget (default 1e6)");
  cmd->add_option("--batch", f.batch, "Restarts per worker dispatch (default 1e4)");
  cmd->add_option("--workers,-w", f.workers, "Worker threads (default 1)");
  cmd->add_option("--seed,-s", f.seed, "RNG seed");
  cmd->add_option("--time-limit", f.time_limit, "Wall-clock limit in seconds");
  cmd->add_flag("--no-early-stop", f.no_early_stop,
                "Run the full restart/generation budget even after a solution");
  cmd->add_option("--population", f.population, "evolve: population size");
  cmd->add_option("--generations", f.generations, "evolve: generation cap");
  cmd->add_option("--tournament", f.tournament, "evolve: tournament size");
  cmd->add_option("--crossover-rate", f.crossover_rate, "evolve: per-bit crossover probability");
  cmd->add_option("--mutation-rate", f.mutation_rate, "evolve: per-bit flip probability (default 1/n)");
  cmd->add_option("--elitism", f.elitism, "evolve: elites preserved");
}

subsetsum::SolverOptions to_solver_options(const SolveFlags& f, const std::string& engine) {
  subsetsum::SolverOptions opts;
  opts.engine = subsetsum::engine_from_name(engine);
  opts.descent.policy = f.policy == "paper-argmin" ? subsetsum::FlipPolicy::kPaperArgmin
                                                   : subsetsum::FlipPolicy::kSteepest;
  opts.descent.init_density = f.density;
  opts.descent.max_flips = f.max_flips;
  opts.multistart.max_restarts = f.max_restarts;
  opts.multistart.batch = f.batch;
  opts.multistart.workers = f.workers;
  opts.multistart.seed = f.seed;
  opts.multistart.early_stop = !f.no_early_stop;
  if (f.time_limit > 0) opts.multistart.time_limit_s = f.time_limit;
  opts.evolve.population = f.population;
  opts.evolve.generations = f.generations;
  opts.evolve.tournament = f.tournament;
  opts.evolve.crossover_rate = f.crossover_rate;
  opts.evolve.mutation_rate = f.mutation_rate;
  opts.evolve.elitism = f.elitism;
  opts.evolve.seed = f.seed;
  opts.evolve.early_stop = !f.no_early_stop;
  opts.collect_all = f.collect_all;
  opts.cap = f.cap;
  opts.no_timing = f.no_timing;
  return opts;
}

struct TableFlags {
  std::string delimiter = ",";
  std::string decimal_sep = ".";
  std::string thousands = ", ";
  int decimals = 2;
  bool no_header_row = false;
  bool no_label_col = false;
};

void add_table_flags(CLI::App* cmd, TableFlags& f) {
  cmd->add_option("--delimiter", f.delimiter, "CSV delimiter (default ,)");
  cmd->add_option("--decimal-sep", f.decimal_sep, "Decimal separator (default .)");
  cmd->add_option("--thousands", f.thousands, "Thousands separators to strip (default \", \")");
  cmd->add_option("--decimals", f.decimals, "Minor-unit digits (default 2)");
  cmd->add_flag("--no-header-row", f.no_header_row, "First CSV row holds data, not labels");
  cmd->add_flag("--no-label-col", f.no_label_col, "First CSV column holds data, not labels");
}

subsetsum::ParseOptions to_parse_options(const TableFlags& f) {
  subsetsum::ParseOptions opts;
  if (f.delimiter.size() != 1)
    throw Error(subsetsum::Errc::BadConfig, "delimiter must be one character");
  if (f.decimal_sep.size() != 1)
    throw Error(subsetsum::Errc::BadConfig, "decimal separator must be one character");
  opts.delimiter = f.delimiter[0];
  opts.decimal_separator = f.decimal_sep[0];
  opts.thousands_separators = f.thousands;
  opts.decimals = f.decimals;
  opts.header_row = !f.no_header_row;
  opts.label_column = !f.no_label_col;
  return opts;
}

int run(int argc, char** argv) {
  CLI::App app{"Subset-sum solving toolkit: QUBO/Ising reductions, Hopfield multistart descent, "
               "an evolutionary digital annealer, exact oracles, and financial-table auditing"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample subset-sum problems with a planted solution");
  subsetsum::GeneratorConfig gen_cfg;
  std::string gen_out_dir = ".";
  gen->add_option("--n", gen_cfg.n, "Number of values")->required();
  gen->add_option("--k", gen_cfg.k, "Planted subset size")->required();
  gen->add_option("--xmin", gen_cfg.x_min, "Minimum value")->required();
  gen->add_option("--xmax", gen_cfg.x_max, "Maximum value")->required();
  gen->add_option("--samples", gen_cfg.samples, "Instances to generate (default 1)");
  gen->add_option("--seed", gen_cfg.seed, "RNG seed");
  gen->add_option("--out-dir", gen_out_dir, "Directory for problem files (default .)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a problem file");
  std::string solve_problem, solve_engine = "hopfield", solve_out;
  SolveFlags solve_flags;
  solve->add_option("--problem,-p", solve_problem, "Problem JSON file")->required();
  solve->add_option("--engine,-e", solve_engine, "hopfield|evolve|brute|dp|mitm")
      ->check(CLI::IsMember({"hopfield", "evolve", "brute", "dp", "mitm"}));
  solve->add_flag("--collect-all", solve_flags.collect_all, "Gather multiple distinct solutions");
  solve->add_option("--cap", solve_flags.cap, "Solution cap with --collect-all (default 16)");
  solve->add_flag("--no-timing", solve_flags.no_timing, "Zero wall-time fields for reproducible output");
  solve->add_option("--out,-o", solve_out, "Write the report here instead of stdout");
  add_solver_flags(solve, solve_flags);

  // audit
  auto* audit = app.add_subcommand("audit", "Extract the sum structure of a table");
  std::string audit_table, audit_scope = "column", audit_engine = "oracle-auto", audit_out;
  std::size_t audit_col = 0;
  std::size_t audit_max_per_target = 10;
  bool audit_zero = false, audit_singletons = false;
  TableFlags audit_tflags;
  SolveFlags audit_sflags;
  audit->add_option("--table,-t", audit_table, "CSV table file")->required();
  audit->add_option("--scope", audit_scope, "column|table")
      ->check(CLI::IsMember({"column", "table"}));
  audit->add_option("--col", audit_col, "Column index for column scope (default 0)");
  audit->add_option("--engine,-e", audit_engine, "oracle-auto|hopfield|evolve")
      ->check(CLI::IsMember({"oracle-auto", "hopfield", "evolve"}));
  audit->add_option("--max-per-target", audit_max_per_target,
                    "Relations kept per target, 0 = unbounded (default 10)");
  audit->add_flag("--include-zero-targets", audit_zero, "Also target cells equal to zero");
  audit->add_flag("--include-singletons", audit_singletons, "Keep single-cell relations");
  audit->add_option("--out,-o", audit_out, "Write the structure here instead of stdout");
  add_table_flags(audit, audit_tflags);
  add_solver_flags(audit, audit_sflags);

  // check
  auto* check = app.add_subcommand("check", "Check a sum structure against a table");
  std::string check_structure_path, check_table, check_out;
  std::int64_t check_col = -1;
  TableFlags check_tflags;
  check->add_option("--structure", check_structure_path, "Structure JSON file")->required();
  check->add_option("--table,-t", check_table, "CSV table file")->required();
  check->add_option("--col", check_col, "Re-target relations at this column index");
  check->add_option("--out,-o", check_out, "Write the report here instead of stdout");
  add_table_flags(check, check_tflags);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid and emit CSV");
  std::string bench_grid, bench_engine = "hopfield", bench_out;
  SolveFlags bench_flags;
  bench->add_option("--grid", bench_grid, "Grid JSON file (array of generator configs)")->required();
  bench->add_option("--engine,-e", bench_engine, "hopfield|evolve|brute|dp|mitm")
      ->check(CLI::IsMember({"hopfield", "evolve", "brute", "dp", "mitm"}));
  bench->add_flag("--no-timing", bench_flags.no_timing, "Zero timing columns");
  bench->add_option("--out,-o", bench_out, "Write the CSV here instead of stdout");
  add_solver_flags(bench, bench_flags);

  // export-ising
  auto* exp = app.add_subcommand("export-ising", "Export a problem as an Ising model document");
  std::string exp_problem, exp_out;
  int exp_bits = 0;
  exp->add_option("--problem,-p", exp_problem, "Problem JSON file")->required();
  exp->add_option("--quantize-bits", exp_bits, "Also quantize to this fixed-point precision");
  exp->add_option("--out,-o", exp_out, "Write the document here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0, usage errors exit 1
  }

  if (gen->parsed()) {
    subsetsum::validate_config(gen_cfg);
    nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < gen_cfg.samples; ++i) {
      const auto instance = subsetsum::generate(gen_cfg, i);
      char name[64];
      std::snprintf(name, sizeof(name), "problem_%03zu.json", i);
      const std::string path = gen_out_dir + "/" + name;
      subsetsum::write_problem_file(instance, path);
      manifest.push_back(path);
    }
    std::cout << manifest.dump(2) << "\n";
    return 0;
  }

  if (solve->parsed()) {
    const auto instance = subsetsum::read_problem_file(solve_problem);
    const auto opts = to_solver_options(solve_flags, solve_engine);
    const auto report = subsetsum::solve_instance(instance, opts);
    emit(subsetsum::report_to_json(report), solve_out);
    return report.solved() ? 0 : 2;
  }

  if (audit->parsed()) {
    const auto table = subsetsum::parse_table_file(audit_table, to_parse_options(audit_tflags));
    subsetsum::ExtractOptions opts;
    opts.scope = audit_scope == "table" ? subsetsum::Scope::kTable : subsetsum::Scope::kColumn;
    opts.column = audit_col;
    if (audit_engine == "hopfield") opts.engine = subsetsum::AuditEngine::kHopfield;
    else if (audit_engine == "evolve") opts.engine = subsetsum::AuditEngine::kEvolve;
    else opts.engine = subsetsum::AuditEngine::kOracleAuto;
    opts.max_per_target = audit_max_per_target;
    opts.include_zero_targets = audit_zero;
    opts.include_singletons = audit_singletons;
    const auto sopts = to_solver_options(audit_sflags, "hopfield");
    opts.hopfield = sopts.multistart;
    opts.evolve = sopts.evolve;
    opts.descent = sopts.descent;
    const auto structure = subsetsum::extract_structure(table, opts);
    emit(subsetsum::structure_to_json(structure), audit_out);
    return 0;
  }

  if (check->parsed()) {
    const auto table = subsetsum::parse_table_file(check_table, to_parse_options(check_tflags));
    const auto structure = subsetsum::structure_from_json(slurp(check_structure_path));
    std::optional<std::size_t> retarget;
    if (check_col >= 0) retarget = static_cast<std::size_t>(check_col);
    const auto report = subsetsum::check_structure(structure, table, retarget);
    emit(subsetsum::consistency_to_json(report), check_out);
    return report.all_hold() ? 0 : 2;
  }

  if (bench->parsed()) {
    const auto grid = subsetsum::read_grid(slurp(bench_grid));
    const auto opts = to_solver_options(bench_flags, bench_engine);
    const auto rows = subsetsum::run_benchmark(grid, opts);
    emit(subsetsum::bench_csv(rows), bench_out);
    return 0;
  }

  if (exp->parsed()) {
    const auto instance = subsetsum::read_problem_file(exp_problem);
    const auto ising = subsetsum::qubo_to_ising(subsetsum::build_qubo(instance));
    if (exp_bits > 0) {
      const auto q = subsetsum::quantize(ising, exp_bits);
      nlohmann::ordered_json doc;
      doc["n"] = q.n;
      doc["frac_bits"] = q.frac_bits;
      doc["scale"] = q.scale();
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < q.n; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < q.n; ++j) row.push_back(q.coupling(i, j));
        rows.push_back(std::move(row));
      }
      doc["couplings"] = std::move(rows);
      doc["biases"] = q.biases;
      emit(doc.dump(2) + "\n", exp_out);
    } else {
      emit(subsetsum::export_ising_json(ising), exp_out);
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
