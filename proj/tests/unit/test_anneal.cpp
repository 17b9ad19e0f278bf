#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "subsetsum/anneal.hpp"
#include "subsetsum/model.hpp"
#include "subsetsum/oracle.hpp"
#include "subsetsum/qubo.hpp"

using namespace subsetsum;

namespace {

SpinState spins_from_bits(std::size_t n, std::uint64_t bits) {
  SpinState s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i & 1) ? 1 : -1;
  return s;
}

// Argmin set of the quantized energy over all 2^n states.
std::set<std::uint64_t> quantized_argmin(const QuantizedIsing& q) {
  std::set<std::uint64_t> best;
  std::int64_t best_units = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << q.n); ++bits) {
    const auto e = energy_quantized(q, spins_from_bits(q.n, bits)).units;
    if (best.empty() || e < best_units) {
      best_units = e;
      best.clear();
    }
    if (best.empty() || e == best_units) best.insert(bits);
  }
  return best;
}

std::set<std::uint64_t> exact_ising_argmin(const IsingForm& ising) {
  std::set<std::uint64_t> best;
  WideInt best_e = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ising.n()); ++bits) {
    const auto e = energy_ising_x4(ising, spins_from_bits(ising.n(), bits));
    if (best.empty() || e < best_e) {
      best_e = e;
      best.clear();
    }
    if (best.empty() || e == best_e) best.insert(bits);
  }
  return best;
}

}  // namespace

TEST_CASE("quantize reproduces the documented scaling example") {
  const auto ising = qubo_to_ising(build_qubo(new_instance({1, 2}, 3)));

  const auto q2 = quantize(ising, 2);
  CHECK(q2.scale() == doctest::Approx(0.25));
  CHECK(q2.coupling_value(0, 0) == doctest::Approx(0.25));
  CHECK(q2.coupling_value(0, 1) == doctest::Approx(0.5));
  CHECK(q2.coupling_value(1, 0) == doctest::Approx(0.5));
  CHECK(q2.coupling_value(1, 1) == doctest::Approx(1.0));
  // Biases share the scale and grid but not the coupling range.
  CHECK(q2.bias_value(0) == doctest::Approx(-1.5));
  CHECK(q2.bias_value(1) == doctest::Approx(-3.0));

  // frac_bits=1: 0.25 rounds to 0.5 under ties away from zero.
  const auto q1 = quantize(ising, 1);
  CHECK(q1.coupling_value(0, 0) == doctest::Approx(0.5));
  CHECK(q1.coupling_value(0, 1) == doctest::Approx(0.5));
  CHECK(q1.coupling_value(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("uniform positive couplings all map to 1.0") {
  const auto ising = qubo_to_ising(build_qubo(new_instance({7, 7, 7}, 10)));
  const auto q = quantize(ising, 8);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(q.coupling_value(i, j) == doctest::Approx(1.0));
}

TEST_CASE("degenerate models quantize to the zero grid with identity scale") {
  const auto ising = qubo_to_ising(build_qubo(new_instance({0, 0}, 0)));
  const auto q = quantize(ising, 8);
  CHECK(q.degenerate);
  CHECK(q.scale() == doctest::Approx(1.0));
  for (auto c : q.couplings) CHECK(c == 0);
  for (auto b : q.biases) CHECK(b == 0);
}

TEST_CASE("quantize validates its arguments") {
  const auto ising = qubo_to_ising(build_qubo(new_instance({1, 2}, 3)));
  CHECK_THROWS_AS(quantize(ising, 0), Error);
  CHECK_THROWS_AS(quantize(ising, kMaxFracBits + 1), Error);
}

TEST_CASE("quantized couplings stay on the grid inside [-2, 1] across magnitudes") {
  SplitMix64 rng(5150);
  const Amount mags[] = {10'000, 1'000'000, 100'000'000, 10'000'000'000,
                         100'000'000'000'000};
  for (const Amount mag : mags) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rand_below(rng, 10);
      std::vector<Amount> values(n);
      for (auto& v : values) v = rand_range(rng, -mag, mag);
      const auto inst = new_instance(values, rand_range(rng, -mag, mag));
      const int fb = 1 + static_cast<int>(rand_below(rng, 16));
      const auto q = quantize(qubo_to_ising(build_qubo(inst)), fb);
      CHECK(q.scale() > 0.0);
      const std::int64_t unit = std::int64_t{1} << fb;
      for (auto c : q.couplings) {
        CHECK(c <= unit);       // <= 1.0
        CHECK(c >= -2 * unit);  // >= -2.0
      }
    }
  }
}

TEST_CASE("energy_quantized is exact on the grid") {
  const auto ising = qubo_to_ising(build_qubo(new_instance({1, 2}, 3)));
  const auto q = quantize(ising, 4);
  // All-zero model evaluates to zero everywhere.
  const auto zeros = quantize(qubo_to_ising(build_qubo(new_instance({0, 0}, 0))), 4);
  for (std::uint64_t bits = 0; bits < 4; ++bits)
    CHECK(energy_quantized(zeros, spins_from_bits(2, bits)).units == 0);

  // Manual evaluation at s = [+1, -1] in grid units (16ths):
  // couplings [[4, -8], [-8, 16]] signs (+,-,-,+) and biases [-24, -48] -> s.
  const auto e = energy_quantized(q, {1, -1});
  CHECK(e.units == (4 - 8 - 8 + 16) + (-24) - (-48));
  CHECK(e.value() == doctest::Approx(e.units / 16.0));

  CHECK_THROWS_AS(energy_quantized(q, {1}), Error);
}

TEST_CASE("high-precision quantization preserves the argmin on representable models") {
  // x = [1,2,4], T = 3: scale 1/16 puts every scaled coefficient on the
  // 2^-4 grid, so frac_bits >= 4 loses nothing.
  const auto inst = new_instance({1, 2, 4}, 3);
  const auto ising = qubo_to_ising(build_qubo(inst));
  const auto q = quantize(ising, 8);
  CHECK(quantized_argmin(q) == exact_ising_argmin(ising));
}

TEST_CASE("positive scaling without rounding preserves argmin sets") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rand_below(rng, 8);
    std::vector<Amount> values(n);
    for (auto& v : values) v = rand_range(rng, -1'000'000, 1'000'000);
    const auto inst = new_instance(values, rand_range(rng, -1'000'000, 1'000'000));
    const auto ising = qubo_to_ising(build_qubo(inst));
    const auto q = quantize(ising, 8);

    // Exact scaled energies: num * E_x4 compared as wide integers.
    std::set<std::uint64_t> scaled_best;
    WideInt best = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      const auto e = q.scale_num * energy_ising_x4(ising, spins_from_bits(n, bits));
      if (scaled_best.empty() || e < best) {
        best = e;
        scaled_best.clear();
      }
      if (scaled_best.empty() || e == best) scaled_best.insert(bits);
    }
    CHECK(scaled_best == exact_ising_argmin(ising));
  }
}

TEST_CASE("coarse quantization admits spurious optima at financial magnitudes") {
  // x_max = 1e6: at frac_bits=8 the grid is far coarser than the coefficient
  // spread, so some quantized-minimal state fails exact verification.
  bool found = false;
  for (std::uint64_t seed = 0; seed < 50 && !found; ++seed) {
    GeneratorConfig cfg{10, 3, -1'000'000, 1'000'000, 1, seed};
    const auto inst = generate(cfg);
    const auto q = quantize(qubo_to_ising(build_qubo(inst)), 8);
    for (const auto bits : quantized_argmin(q)) {
      SelectionMask z(inst.n());
      for (std::size_t i = 0; i < inst.n(); ++i) z[i] = bits >> i & 1;
      if (!verify(inst, z)) {
        found = true;
        break;
      }
    }
  }
  CHECK(found);
}

TEST_CASE("quantize_exported mirrors the instance path up to the folded diagonal") {
  const auto inst = new_instance({1, 2, -3}, 2);
  const auto ising = qubo_to_ising(build_qubo(inst));
  const auto model = read_ising_json(export_ising_json(ising));
  const auto q = quantize_exported(model, 6);
  CHECK(q.n == 3);
  CHECK(q.scale() > 0.0);
  // Off-diagonal entries follow the pair values; the diagonal is absent.
  for (std::size_t i = 0; i < 3; ++i) CHECK(q.coupling(i, i) == 0);
  // Symmetry is preserved.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(q.coupling(i, j) == q.coupling(j, i));
}

TEST_CASE("evolve finds trivial and generated solutions deterministically") {
  const auto tiny = new_instance({5}, 5);
  EvolveConfig ecfg;
  ecfg.seed = 8;
  const auto report = evolve(tiny, ecfg);
  CHECK(report.solved());
  CHECK(report.restarts_used == 0);  // present in the initial population

  GeneratorConfig gcfg{16, 4, -10'000, 10'000, 1, 314};
  const auto inst = generate(gcfg);
  EvolveConfig e2;
  e2.seed = 9;
  const auto r1 = evolve(inst, e2);
  const auto r2 = evolve(inst, e2);
  CHECK(r1.solved());
  CHECK(r1.restarts_used == r2.restarts_used);
  CHECK(r1.flips_total == r2.flips_total);
  CHECK(r1.distinct_optima == r2.distinct_optima);
  REQUIRE(r1.solutions.size() == r2.solutions.size());
  for (std::size_t i = 0; i < r1.solutions.size(); ++i)
    CHECK(r1.solutions[i].indices == r2.solutions[i].indices);
  for (const auto& sol : r1.solutions)
    CHECK(verify(inst, mask_from_indices(inst.n(), sol.indices)));
}

TEST_CASE("elite fitness never worsens between consecutive bred generations") {
  GeneratorConfig gcfg{20, 5, -10'000, 10'000, 1, 161};
  const auto inst = generate(gcfg);

  std::vector<std::pair<std::int64_t, bool>> trace;
  EvolveConfig ecfg;
  ecfg.seed = 5;
  ecfg.generations = 200;
  ecfg.early_stop = false;
  ecfg.on_generation = [&](std::uint64_t, std::int64_t elite, bool reseeded) {
    trace.emplace_back(elite, reseeded);
  };
  evolve(inst, ecfg);

  REQUIRE(trace.size() > 10);
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (!trace[i].second) CHECK(trace[i].first <= trace[i - 1].first);
}

TEST_CASE("evolve validates configuration") {
  const auto inst = new_instance({1, 2}, 3);
  EvolveConfig bad;
  bad.population = 1;
  CHECK_THROWS_AS(evolve(inst, bad), Error);
  bad.population = 8;
  bad.elitism = 8;
  CHECK_THROWS_AS(evolve(inst, bad), Error);
}

TEST_CASE("evolve with quantized fitness reports distinct optima") {
  GeneratorConfig gcfg{12, 3, -1'000'000, 1'000'000, 1, 404};
  const auto inst = generate(gcfg);
  EvolveConfig ecfg;
  ecfg.seed = 6;
  ecfg.generations = 50;
  ecfg.early_stop = false;
  const auto report = evolve(inst, ecfg, FitnessMode::quantized(6));
  CHECK(report.distinct_optima >= 1);
  CHECK(report.verified_count <= report.distinct_optima);
  for (const auto& sol : report.solutions)
    CHECK(verify(inst, mask_from_indices(inst.n(), sol.indices)));
}
