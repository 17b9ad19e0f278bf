#include "subsetsum/anneal.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <set>

namespace subsetsum {

namespace {

constexpr WideInt kWideMax = (~static_cast<unsigned __int128>(0)) >> 1;

WideInt wide_abs(WideInt v) { return v < 0 ? -v : v; }

// round(num*v*2^fb / den) with ties away from zero, exact.
std::int64_t quantize_units(WideInt v, WideInt num, WideInt den, int frac_bits) {
  WideInt t = num * v;
  if (wide_abs(t) > (kWideMax >> frac_bits))
    throw Error(Errc::MagnitudeOverflow, "coefficient too extreme to quantize");
  t <<= frac_bits;
  WideInt q = t / den;
  const WideInt rem = t % den;
  if (rem != 0 && 2 * wide_abs(rem) >= den) q += t < 0 ? -1 : 1;
  if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min())
    throw Error(Errc::MagnitudeOverflow, "quantized coefficient does not fit 64 bits");
  return static_cast<std::int64_t>(q);
}

struct RawModel {
  std::size_t n = 0;
  std::vector<WideInt> couplings;  // full symmetric matrix on an integer grid
  std::vector<WideInt> biases;
};

QuantizedIsing quantize_raw(const RawModel& raw, int frac_bits) {
  if (frac_bits < 1 || frac_bits > kMaxFracBits)
    throw Error(Errc::BadConfig, "frac_bits must lie in [1, " + std::to_string(kMaxFracBits) + "]");
  if (raw.n > kMaxQuantizeN)
    throw Error(Errc::InstanceTooLarge,
                "quantization materializes the coupling matrix; n <= " +
                    std::to_string(kMaxQuantizeN));

  QuantizedIsing out;
  out.n = raw.n;
  out.frac_bits = frac_bits;

  // One global scale: the most constraining coupling lands on the boundary of
  // [-2.0, 1.0]. Biases share the scale and grid but not the range.
  WideInt max_pos = 0, min_neg = 0;
  for (const auto c : raw.couplings) {
    if (c > max_pos) max_pos = c;
    if (c < min_neg) min_neg = c;
  }
  if (max_pos == 0 && min_neg == 0) {
    out.degenerate = true;  // scale undefined; identity keeps the grid exact
  } else if (max_pos == 0) {
    out.scale_num = 2;
    out.scale_den = -min_neg;
  } else if (min_neg == 0) {
    out.scale_num = 1;
    out.scale_den = max_pos;
  } else {
    // min(1/max_pos, 2/|min_neg|) by cross-multiplication.
    if (-min_neg >= 2 * max_pos) {
      out.scale_num = 2;
      out.scale_den = -min_neg;
    } else {
      out.scale_num = 1;
      out.scale_den = max_pos;
    }
  }

  out.couplings.resize(raw.n * raw.n);
  for (std::size_t i = 0; i < raw.couplings.size(); ++i)
    out.couplings[i] = quantize_units(raw.couplings[i], out.scale_num, out.scale_den, frac_bits);
  out.biases.resize(raw.n);
  for (std::size_t i = 0; i < raw.n; ++i)
    out.biases[i] = quantize_units(raw.biases[i], out.scale_num, out.scale_den, frac_bits);
  return out;
}

}  // namespace

QuantizedIsing quantize(const IsingForm& ising, int frac_bits) {
  RawModel raw;
  raw.n = ising.n();
  raw.couplings.resize(raw.n * raw.n);
  for (std::size_t i = 0; i < raw.n; ++i)
    for (std::size_t j = 0; j < raw.n; ++j) raw.couplings[i * raw.n + j] = ising.coupling_x4(i, j);
  raw.biases.resize(raw.n);
  for (std::size_t i = 0; i < raw.n; ++i) raw.biases[i] = ising.linear_x4(i);
  return quantize_raw(raw, frac_bits);
}

QuantizedIsing quantize_exported(const ExportedIsing& model, int frac_bits) {
  RawModel raw;
  raw.n = model.n;
  raw.couplings.assign(raw.n * raw.n, 0);
  for (const auto& c : model.quadratic_x4) {
    if (c.j >= raw.n) throw Error(Errc::DimensionMismatch, "coupling index out of range");
    // Split the pair value across the symmetric matrix; biases are doubled to
    // stay on the same uniformly scaled grid (the scale absorbs the factor).
    raw.couplings[c.i * raw.n + c.j] = c.value_x4;
    raw.couplings[c.j * raw.n + c.i] = c.value_x4;
  }
  raw.biases.resize(raw.n);
  for (std::size_t i = 0; i < raw.n; ++i) raw.biases[i] = 2 * static_cast<WideInt>(model.linear_x4[i]);
  return quantize_raw(raw, frac_bits);
}

FixedPoint energy_quantized(const QuantizedIsing& q, const SpinState& s) {
  if (s.size() != q.n) throw Error(Errc::DimensionMismatch, "state length != n");
  std::int64_t units = 0;
  for (std::size_t i = 0; i < q.n; ++i) {
    std::int64_t row = 0;
    const std::int64_t* c = q.couplings.data() + i * q.n;
    for (std::size_t j = 0; j < q.n; ++j) row += s[j] > 0 ? c[j] : -c[j];
    row += q.biases[i];
    units += s[i] > 0 ? row : -row;
  }
  // s'Qs + q's with q's counted once: the loop added s_i*b_i inside the row.
  return {units, q.frac_bits};
}

namespace {

struct Individual {
  SelectionMask bits;
  std::int64_t fitness = 0;
};

}  // namespace

SolveReport evolve(const SubsetSumInstance& instance, const EvolveConfig& ecfg,
                   FitnessMode fitness) {
  if (ecfg.population < 2) throw Error(Errc::BadConfig, "population must be >= 2");
  if (ecfg.elitism >= ecfg.population)
    throw Error(Errc::BadConfig, "elitism must be smaller than population");
  if (ecfg.tournament < 1) throw Error(Errc::BadConfig, "tournament size must be >= 1");
  if (ecfg.cap == 0) throw Error(Errc::BadConfig, "cap must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = instance.n();
  const double mutation = ecfg.mutation_rate > 0 ? ecfg.mutation_rate : 1.0 / static_cast<double>(n);

  std::optional<QuantizedIsing> model;
  if (fitness.kind == FitnessKind::kQuantized)
    model = quantize(qubo_to_ising(build_qubo(instance)), fitness.frac_bits);

  auto fitness_of = [&](const SelectionMask& bits) -> std::int64_t {
    if (fitness.kind == FitnessKind::kExactResidual) {
      const std::int64_t r = residual(instance, bits);
      return r < 0 ? -r : r;
    }
    return energy_quantized(*model, mask_to_spins(bits)).units;
  };

  SplitMix64 rng(derive_seed(ecfg.seed, 0));
  auto random_bits = [&] {
    SelectionMask bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    return bits;
  };

  std::vector<Individual> pop(ecfg.population);
  for (auto& ind : pop) {
    ind.bits = random_bits();
    ind.fitness = fitness_of(ind.bits);
  }

  const std::size_t keep_cap = std::max<std::size_t>(ecfg.cap, 64);
  std::int64_t best_fit = std::numeric_limits<std::int64_t>::max();
  std::set<SelectionMask> best_states;
  std::uint64_t flips_total = 0;
  bool found_verified = false;

  auto record = [&](const Individual& ind) {
    if (ind.fitness > best_fit) return;
    if (ind.fitness < best_fit) {
      best_fit = ind.fitness;
      best_states.clear();
    }
    best_states.insert(ind.bits);
    if (best_states.size() > keep_cap) best_states.erase(std::prev(best_states.end()));
    if (fitness.kind == FitnessKind::kExactResidual && ind.fitness == 0 &&
        verify(instance, ind.bits, /*allow_empty=*/false))
      found_verified = true;
  };
  for (const auto& ind : pop) record(ind);

  std::vector<std::size_t> order(ecfg.population);
  std::uint64_t generations_done = 0;

  for (std::uint64_t gen = 0; gen < ecfg.generations; ++gen) {
    if (ecfg.early_stop && found_verified) break;
    ++generations_done;

    // Converged populations restart from fresh random states.
    bool converged = true;
    for (std::size_t i = 1; i < pop.size() && converged; ++i)
      converged = pop[i].bits == pop[0].bits;
    if (converged) {
      for (auto& ind : pop) {
        ind.bits = random_bits();
        ind.fitness = fitness_of(ind.bits);
        record(ind);
      }
    }
    if (ecfg.on_generation) {
      std::int64_t elite = pop[0].fitness;
      for (const auto& ind : pop) elite = std::min(elite, ind.fitness);
      ecfg.on_generation(gen, elite, converged);
    }
    if (converged) continue;

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness < pop[b].fitness; });

    std::vector<Individual> next;
    next.reserve(ecfg.population);
    for (std::size_t e = 0; e < ecfg.elitism; ++e) next.push_back(pop[order[e]]);

    auto tournament_pick = [&]() -> const Individual& {
      std::size_t winner = rand_below(rng, ecfg.population);
      for (std::size_t t = 1; t < ecfg.tournament; ++t) {
        const std::size_t challenger = rand_below(rng, ecfg.population);
        if (pop[challenger].fitness < pop[winner].fitness) winner = challenger;
      }
      return pop[winner];
    };

    while (next.size() < ecfg.population) {
      const Individual& p1 = tournament_pick();
      const Individual& p2 = tournament_pick();
      Individual child;
      child.bits.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        child.bits[i] = rand_unit(rng) < ecfg.crossover_rate ? p2.bits[i] : p1.bits[i];
      for (std::size_t i = 0; i < n; ++i) {
        if (rand_unit(rng) < mutation) {
          child.bits[i] ^= 1;
          ++flips_total;
        }
      }
      child.fitness = fitness_of(child.bits);
      record(child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }

  SolveReport report;
  report.engine = "evolve";
  report.seed = ecfg.seed;
  report.restarts_used = generations_done;
  report.flips_total = flips_total;
  report.distinct_optima = best_states.size();
  for (const auto& st : best_states) {
    if (!verify(instance, st, /*allow_empty=*/false)) continue;
    ++report.verified_count;
    if (report.solutions.size() < ecfg.cap) {
      FoundSolution sol;
      sol.indices = mask_indices(st);
      for (auto i : sol.indices) sol.values.push_back(instance.values[i]);
      report.solutions.push_back(std::move(sol));
    }
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace subsetsum
