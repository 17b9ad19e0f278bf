#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subsetsum/anneal.hpp"
#include "subsetsum/audit.hpp"
#include "subsetsum/bench.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/oracle.hpp"
#include "subsetsum/qubo.hpp"

namespace py = pybind11;
using namespace subsetsum;

namespace {

py::int_ wide_to_pyint(WideInt v) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(to_string_wide(v).c_str(), nullptr, 10));
}

SelectionMask mask_arg(const SubsetSumInstance& inst, const std::vector<std::size_t>& indices) {
  return mask_from_indices(inst.n(), indices);
}

SolverOptions make_options(const std::string& engine, const std::string& policy,
                           std::uint64_t max_restarts, std::uint64_t batch, std::size_t workers,
                           std::uint64_t seed, bool early_stop, bool collect_all, std::size_t cap,
                           std::size_t population, std::uint64_t generations) {
  SolverOptions opts;
  opts.engine = engine_from_name(engine);
  opts.descent.policy =
      policy == "paper-argmin" ? FlipPolicy::kPaperArgmin : FlipPolicy::kSteepest;
  opts.multistart.max_restarts = max_restarts;
  opts.multistart.batch = batch;
  opts.multistart.workers = workers;
  opts.multistart.seed = seed;
  opts.multistart.early_stop = early_stop;
  opts.evolve.seed = seed;
  opts.evolve.early_stop = early_stop;
  opts.evolve.population = population;
  opts.evolve.generations = generations;
  opts.collect_all = collect_all;
  opts.cap = cap;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Subset-sum solving toolkit: QUBO/Ising reductions, Hopfield multistart descent, "
            "an evolutionary digital annealer, exact oracles, and table auditing";

  py::register_exception<Error>(m, "SubsetSumError");

  py::class_<Meta>(m, "Meta")
      .def(py::init<>())
      .def_readwrite("seed", &Meta::seed)
      .def_readwrite("decimals", &Meta::decimals)
      .def_readwrite("source", &Meta::source);

  py::class_<SubsetSumInstance>(m, "Instance")
      .def(py::init([](std::vector<Amount> values, Amount target) {
             return new_instance(std::move(values), target);
           }),
           py::arg("values"), py::arg("target"))
      .def_readonly("values", &SubsetSumInstance::values)
      .def_readonly("target", &SubsetSumInstance::target)
      .def_readonly("planted", &SubsetSumInstance::planted)
      .def_readonly("meta", &SubsetSumInstance::meta)
      .def_property_readonly("n", &SubsetSumInstance::n)
      .def("to_json", &write_problem)
      .def_static("from_json", &read_problem)
      .def("__repr__", [](const SubsetSumInstance& inst) {
        return "Instance(n=" + std::to_string(inst.n()) +
               ", target=" + std::to_string(inst.target) + ")";
      });

  m.def(
      "generate",
      [](std::size_t n, std::size_t k, Amount x_min, Amount x_max, std::uint64_t seed,
         std::size_t sample_index) {
        GeneratorConfig cfg{n, k, x_min, x_max, 1, seed};
        return generate(cfg, sample_index);
      },
      py::arg("n"), py::arg("k"), py::arg("x_min"), py::arg("x_max"), py::arg("seed") = 0,
      py::arg("sample_index") = 0);

  m.def(
      "solution_ratio",
      [](std::size_t n, Amount x_min, Amount x_max) {
        const auto sr = solution_ratio(n, x_min, x_max);
        return py::make_tuple(sr.r, sr.interval_lo, sr.interval_hi);
      },
      py::arg("n"), py::arg("x_min"), py::arg("x_max"),
      "Returns (r, interval_lo, interval_hi) with r = 2^n / (n*(x_max-x_min)).");

  m.def(
      "residual",
      [](const SubsetSumInstance& inst, const std::vector<std::size_t>& indices) {
        return residual(inst, mask_arg(inst, indices));
      },
      py::arg("instance"), py::arg("indices"));

  m.def(
      "energy",
      [](const SubsetSumInstance& inst, const std::vector<std::size_t>& indices) {
        return wide_to_pyint(energy_qubo(inst, mask_arg(inst, indices)));
      },
      py::arg("instance"), py::arg("indices"), "QUBO energy (sigma-T)^2 - T^2, exact.");

  m.def(
      "verify",
      [](const SubsetSumInstance& inst, const std::vector<std::size_t>& indices,
         bool allow_empty) { return verify(inst, mask_arg(inst, indices), allow_empty); },
      py::arg("instance"), py::arg("indices"), py::arg("allow_empty") = false);

  py::class_<FoundSolution>(m, "Solution")
      .def_readonly("indices", &FoundSolution::indices)
      .def_readonly("values", &FoundSolution::values);

  py::class_<SolveReport>(m, "Report")
      .def_readonly("solutions", &SolveReport::solutions)
      .def_readonly("restarts_used", &SolveReport::restarts_used)
      .def_readonly("flips_total", &SolveReport::flips_total)
      .def_readonly("distinct_optima", &SolveReport::distinct_optima)
      .def_readonly("verified_count", &SolveReport::verified_count)
      .def_readonly("wall_time_s", &SolveReport::wall_time_s)
      .def_readonly("engine", &SolveReport::engine)
      .def_readonly("seed", &SolveReport::seed)
      .def_property_readonly("solved", &SolveReport::solved)
      .def("to_json", &report_to_json);

  m.def(
      "solve",
      [](const SubsetSumInstance& inst, const std::string& engine, const std::string& policy,
         std::uint64_t max_restarts, std::uint64_t batch, std::size_t workers, std::uint64_t seed,
         bool early_stop, bool collect_all, std::size_t cap, std::size_t population,
         std::uint64_t generations) {
        return solve_instance(inst, make_options(engine, policy, max_restarts, batch, workers,
                                                 seed, early_stop, collect_all, cap, population,
                                                 generations));
      },
      py::arg("instance"), py::arg("engine") = "hopfield", py::arg("policy") = "steepest",
      py::arg("max_restarts") = 1'000'000, py::arg("batch") = 10'000, py::arg("workers") = 1,
      py::arg("seed") = 0, py::arg("early_stop") = true, py::arg("collect_all") = false,
      py::arg("cap") = 16, py::arg("population") = 128, py::arg("generations") = 10'000);

  m.def(
      "brute_force",
      [](const SubsetSumInstance& inst, bool stop_at_first, std::size_t cap, bool include_empty) {
        const auto res = brute_force(inst, stop_at_first, cap, include_empty);
        std::vector<std::vector<std::size_t>> masks;
        for (const auto& mask : res.masks) masks.push_back(mask_indices(mask));
        return py::make_tuple(masks, res.exhausted, res.cap_hit);
      },
      py::arg("instance"), py::arg("stop_at_first") = false,
      py::arg("cap") = kDefaultEnumerationCap, py::arg("include_empty") = false,
      "Returns (masks_as_index_lists, exhausted, cap_hit).");

  m.def(
      "meet_in_middle",
      [](const SubsetSumInstance& inst, std::size_t cap, bool include_empty) {
        const auto res = meet_in_middle(inst, cap, include_empty);
        std::vector<std::vector<std::size_t>> masks;
        for (const auto& mask : res.masks) masks.push_back(mask_indices(mask));
        return py::make_tuple(masks, res.exhausted, res.cap_hit);
      },
      py::arg("instance"), py::arg("cap") = kDefaultEnumerationCap,
      py::arg("include_empty") = false);

  m.def(
      "dp_decide",
      [](const SubsetSumInstance& inst, std::size_t memory_cap) -> py::object {
        const auto res = dp_decide(inst, memory_cap);
        if (!res.feasible) return py::none();
        return py::cast(mask_indices(*res.witness));
      },
      py::arg("instance"), py::arg("memory_cap") = kDefaultDpMemoryCap,
      "Witness index list when feasible, None otherwise.");

  m.def("count_solutions", &count_solutions, py::arg("instance"),
        py::arg("include_empty") = false);

  m.def(
      "export_ising",
      [](const SubsetSumInstance& inst) {
        return export_ising_json(qubo_to_ising(build_qubo(inst)));
      },
      py::arg("instance"), "Ising model document (JSON text).");

  py::class_<QuantizedIsing>(m, "QuantizedIsing")
      .def_readonly("n", &QuantizedIsing::n)
      .def_readonly("frac_bits", &QuantizedIsing::frac_bits)
      .def_readonly("degenerate", &QuantizedIsing::degenerate)
      .def_property_readonly("scale", &QuantizedIsing::scale)
      .def("coupling", &QuantizedIsing::coupling_value, py::arg("i"), py::arg("j"))
      .def("bias", &QuantizedIsing::bias_value, py::arg("i"));

  m.def(
      "quantize",
      [](const SubsetSumInstance& inst, int frac_bits) {
        return quantize(qubo_to_ising(build_qubo(inst)), frac_bits);
      },
      py::arg("instance"), py::arg("frac_bits") = 8);

  m.def(
      "energy_quantized",
      [](const QuantizedIsing& q, const std::vector<int>& spins) {
        SpinState s;
        for (int v : spins) s.push_back(v > 0 ? 1 : -1);
        return energy_quantized(q, s).value();
      },
      py::arg("quantized"), py::arg("spins"));

  // Audit layer: JSON/CSV text in, JSON text out.
  m.def(
      "audit_table",
      [](const std::string& csv_text, const std::string& scope, std::size_t column,
         std::size_t max_per_target, bool include_zero_targets, bool include_singletons) {
        ExtractOptions opts;
        opts.scope = scope == "table" ? Scope::kTable : Scope::kColumn;
        opts.column = column;
        opts.max_per_target = max_per_target;
        opts.include_zero_targets = include_zero_targets;
        opts.include_singletons = include_singletons;
        return structure_to_json(extract_structure(parse_table(csv_text), opts));
      },
      py::arg("csv_text"), py::arg("scope") = "column", py::arg("column") = 0,
      py::arg("max_per_target") = 10, py::arg("include_zero_targets") = false,
      py::arg("include_singletons") = false, "Extract a sum structure (JSON text).");

  m.def(
      "check_table",
      [](const std::string& structure_json, const std::string& csv_text,
         std::optional<std::size_t> column) {
        const auto report =
            check_structure(structure_from_json(structure_json), parse_table(csv_text), column);
        return py::make_tuple(consistency_to_json(report), report.all_hold());
      },
      py::arg("structure_json"), py::arg("csv_text"), py::arg("column") = py::none(),
      "Returns (report_json, all_hold).");
}
