#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "subsetsum/bench.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/qubo.hpp"

using namespace subsetsum;

namespace {

const std::string kCli = SUBSETSUM_CLI_PATH;
const std::string kFixtures = SUBSETSUM_FIXTURES_DIR;

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "/tmp/subsetsum_test_out_" + std::to_string(++counter) + ".txt";
  const std::string cmd = kCli + " " + args + " > " + out_path + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, ss.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("run_benchmark aggregates rows and formats CSV") {
  std::vector<GeneratorConfig> grid = {{12, 3, -1000, 1000, 2, 7}};
  SolverOptions opts;
  opts.multistart.max_restarts = 50'000;
  opts.no_timing = true;
  const auto rows = run_benchmark(grid, opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].solved == 2);
  CHECK(rows[0].mean_restarts > 0.0);
  CHECK(rows[0].mean_time_s == 0.0);

  const auto csv = bench_csv(rows);
  CHECK(csv.rfind("n,x_max,k,samples,solved,mean_restarts,mean_time_s,engine\n", 0) == 0);
  CHECK(csv.find(",hopfield\n") != std::string::npos);

  CHECK(bench_csv({}) == "n,x_max,k,samples,solved,mean_restarts,mean_time_s,engine\n");
}

TEST_CASE("engine names round-trip and reject unknowns") {
  for (const auto* name : {"hopfield", "evolve", "brute", "dp", "mitm"})
    CHECK(engine_name(engine_from_name(name)) == name);
  CHECK_THROWS_AS(engine_from_name("annealer"), Error);
}

TEST_CASE("solve_instance dispatches to the exact engines") {
  const auto inst = new_instance({1, 2, 3}, 3);
  for (const auto engine : {Engine::kBrute, Engine::kMitm, Engine::kDp}) {
    SolverOptions opts;
    opts.engine = engine;
    opts.no_timing = true;
    const auto report = solve_instance(inst, opts);
    CHECK(report.solved());
    CHECK(report.verified_count >= 1);
  }

  SolverOptions collect;
  collect.engine = Engine::kBrute;
  collect.collect_all = true;
  collect.cap = 10;
  CHECK(solve_instance(inst, collect).solutions.size() == 2);
}

TEST_CASE("cli solve reports solutions and exit codes") {
  run_cli("generate --n 14 --k 4 --xmin -5000 --xmax 5000 --samples 1 --seed 77 --out-dir /tmp");
  const auto res = run_cli("solve --problem /tmp/problem_000.json --seed 5 --no-timing");
  CHECK(res.exit_code == 0);

  const auto doc = nlohmann::json::parse(res.out);
  REQUIRE(!doc["solutions"].empty());
  CHECK(doc["engine"] == "hopfield");

  // Every reported solution verifies on re-parse.
  const auto inst = read_problem_file("/tmp/problem_000.json");
  for (const auto& sol : doc["solutions"]) {
    const auto indices = sol["indices"].get<std::vector<std::size_t>>();
    CHECK(verify(inst, mask_from_indices(inst.n(), indices)));
  }
}

TEST_CASE("cli solve maps no-solution to exit 2") {
  const auto path =
      write_temp("infeasible.json", write_problem(new_instance({1}, 2)));
  const auto res = run_cli("solve --problem " + path + " --max-restarts 200 --no-timing");
  CHECK(res.exit_code == 2);
  const auto doc = nlohmann::json::parse(res.out);
  CHECK(doc["solutions"].empty());
}

TEST_CASE("cli usage errors exit 1") {
  CHECK(run_cli("solve --problem /tmp/problem_000.json --engine bogus").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("solve").exit_code == 1);
  CHECK(run_cli("solve --problem /nonexistent.json").exit_code == 1);
}

TEST_CASE("cli output is byte-identical across reruns and worker counts") {
  run_cli("generate --n 12 --k 3 --xmin -500 --xmax 500 --samples 1 --seed 2 --out-dir /tmp");
  const std::string base =
      "solve --problem /tmp/problem_000.json --seed 9 --no-timing --no-early-stop "
      "--max-restarts 3000 --batch 250 --collect-all --cap 4";
  const auto a = run_cli(base + " --workers 1");
  const auto b = run_cli(base + " --workers 1");
  const auto c = run_cli(base + " --workers 8");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.exit_code == 0);
}

TEST_CASE("cli audit and check cooperate on the fixture") {
  const auto audit = run_cli("audit --table " + kFixtures +
                             "/statement_small.csv --scope column --col 0 --out /tmp/structure.json");
  CHECK(audit.exit_code == 0);

  const auto ok = run_cli("check --structure /tmp/structure.json --table " + kFixtures +
                          "/statement_small.csv");
  CHECK(ok.exit_code == 0);

  // Corrupt one cell: the check exits 2 and lists violations.
  std::ifstream in(kFixtures + "/statement_small.csv", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto csv = ss.str();
  const auto pos = csv.find("882,500.00");
  REQUIRE(pos != std::string::npos);
  csv.replace(pos, 10, "882,500.01");
  const auto bad_path = write_temp("statement_corrupt.csv", csv);

  const auto bad = run_cli("check --structure /tmp/structure.json --table " + bad_path);
  CHECK(bad.exit_code == 2);
  const auto doc = nlohmann::json::parse(bad.out);
  bool violated = false;
  for (const auto& check : doc) violated |= check["status"] == "violated";
  CHECK(violated);
}

TEST_CASE("cli bench emits the pinned CSV schema") {
  const auto grid_path = write_temp(
      "grid.json", R"([{"n": 12, "k": 3, "x_min": -1000, "x_max": 1000, "samples": 2, "seed": 3}])");
  const auto res = run_cli("bench --grid " + grid_path + " --no-timing --max-restarts 50000");
  CHECK(res.exit_code == 0);
  CHECK(res.out.rfind("n,x_max,k,samples,solved,mean_restarts,mean_time_s,engine\n", 0) == 0);
  CHECK(res.out.find("12,1000,3,2,2,") != std::string::npos);

  const auto rerun = run_cli("bench --grid " + grid_path + " --no-timing --max-restarts 50000");
  CHECK(rerun.out == res.out);
}

TEST_CASE("cli export-ising emits plain and quantized documents") {
  const auto path = write_temp("small.json", write_problem(new_instance({1, 2}, 3)));
  const auto plain = run_cli("export-ising --problem " + path);
  CHECK(plain.exit_code == 0);
  const auto model = read_ising_json(plain.out);
  CHECK(model.n == 2);
  CHECK(model.linear_x4 == std::vector<std::int64_t>{-6, -12});

  const auto quant = run_cli("export-ising --problem " + path + " --quantize-bits 2");
  CHECK(quant.exit_code == 0);
  const auto doc = nlohmann::json::parse(quant.out);
  CHECK(doc["frac_bits"] == 2);
  CHECK(doc["scale"] == doctest::Approx(0.25));
  CHECK(doc["couplings"][1][1] == 4);  // 1.0 in quarter units
}
