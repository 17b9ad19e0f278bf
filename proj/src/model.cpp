#include "subsetsum/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace subsetsum {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_values(const std::vector<Amount>& values) {
  if (values.empty()) throw Error(Errc::EmptyValues, "instance has no values");
  if (values.size() > kMaxValues)
    throw Error(Errc::TooManyValues,
                "instance has " + std::to_string(values.size()) + " values, cap is " +
                    std::to_string(kMaxValues));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Amount v = values[i];
    if (v > kMaxAmountMagnitude || v < -kMaxAmountMagnitude)
      throw Error(Errc::MagnitudeOverflow,
                  "value at index " + std::to_string(i) + " exceeds 2^50 in magnitude");
  }
}

void check_amount(Amount v, const char* what) {
  if (v > kMaxAmountMagnitude || v < -kMaxAmountMagnitude)
    throw Error(Errc::MagnitudeOverflow, std::string(what) + " exceeds 2^50 in magnitude");
}

}  // namespace

SubsetSumInstance new_instance(std::vector<Amount> values, Amount target) {
  check_values(values);
  check_amount(target, "target");
  SubsetSumInstance inst;
  inst.values = std::move(values);
  inst.target = target;
  return inst;
}

void validate_config(const GeneratorConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxValues) throw Error(Errc::BadConfig, "n out of range");
  if (cfg.k < 1 || cfg.k > cfg.n) throw Error(Errc::BadConfig, "k must satisfy 1 <= k <= n");
  if (!(cfg.x_min < cfg.x_max)) throw Error(Errc::BadConfig, "x_min must be < x_max");
  if (cfg.samples < 1) throw Error(Errc::BadConfig, "samples must be >= 1");
  check_amount(cfg.x_min, "x_min");
  check_amount(cfg.x_max, "x_max");
}

SubsetSumInstance generate(const GeneratorConfig& cfg, std::size_t sample_index) {
  validate_config(cfg);
  SplitMix64 rng(derive_seed(cfg.seed, sample_index));

  SubsetSumInstance inst;
  inst.values.resize(cfg.n);
  for (auto& v : inst.values) v = rand_range(rng, cfg.x_min, cfg.x_max);

  // Partial Fisher-Yates for k distinct indices.
  std::vector<std::size_t> idx(cfg.n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < cfg.k; ++i) {
    const auto j = i + rand_below(rng, cfg.n - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> planted(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cfg.k));
  std::sort(planted.begin(), planted.end());

  Amount target = 0;
  for (auto i : planted) target += inst.values[i];
  // The planted sum can exceed the single-amount cap when k and x_max are
  // both near their bounds; reject such configs rather than clamp.
  check_amount(target, "planted target");

  inst.target = target;
  inst.planted = std::move(planted);
  inst.meta.seed = std::to_string(cfg.seed);
  inst.meta.source = "generated n=" + std::to_string(cfg.n) + " k=" + std::to_string(cfg.k) +
                     " sample=" + std::to_string(sample_index);
  return inst;
}

SolutionRatio solution_ratio(std::size_t n, Amount x_min, Amount x_max) {
  if (n < 1) throw Error(Errc::BadConfig, "n must be >= 1");
  if (!(x_min < x_max)) throw Error(Errc::BadConfig, "x_min must be < x_max");
  SolutionRatio out;
  const double states = std::exp2(static_cast<double>(n));
  const double span = static_cast<double>(n) * (static_cast<double>(x_max) - static_cast<double>(x_min));
  out.r = states / span;
  out.interval_lo = static_cast<std::int64_t>(n) * std::min<Amount>(0, x_min);
  out.interval_hi = static_cast<std::int64_t>(n) * std::max<Amount>(0, x_max);
  return out;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(Errc::ParseError, "problem document: " + what);
}

Amount require_amount(const ordered_json& j, const char* field) {
  if (!j.is_number_integer())
    parse_fail(std::string(field) + " must be an integer in minor units");
  return j.get<Amount>();
}

}  // namespace

SubsetSumInstance read_problem(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "values" && key != "target" && key != "planted" && key != "meta")
      parse_fail("unknown field \"" + key + "\"");
  }
  if (!doc.contains("values")) parse_fail("missing \"values\"");
  if (!doc.contains("target")) parse_fail("missing \"target\"");
  if (!doc["values"].is_array()) parse_fail("\"values\" must be an array");

  std::vector<Amount> values;
  values.reserve(doc["values"].size());
  for (const auto& v : doc["values"]) values.push_back(require_amount(v, "values[]"));

  auto inst = new_instance(std::move(values), require_amount(doc["target"], "target"));

  if (doc.contains("planted")) {
    if (!doc["planted"].is_array()) parse_fail("\"planted\" must be an array of indices");
    std::vector<std::size_t> planted;
    for (const auto& v : doc["planted"]) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        parse_fail("planted indices must be nonnegative integers");
      const auto i = v.get<std::uint64_t>();
      if (i >= inst.values.size()) parse_fail("planted index out of range");
      planted.push_back(static_cast<std::size_t>(i));
    }
    std::sort(planted.begin(), planted.end());
    if (std::adjacent_find(planted.begin(), planted.end()) != planted.end())
      parse_fail("planted indices must be distinct");
    Amount sum = 0;
    for (auto i : planted) sum += inst.values[i];
    if (sum != inst.target) parse_fail("planted subset does not sum to target");
    inst.planted = std::move(planted);
  }

  if (doc.contains("meta")) {
    const auto& m = doc["meta"];
    if (!m.is_object()) parse_fail("\"meta\" must be an object");
    for (const auto& [key, _] : m.items()) {
      if (key != "seed" && key != "decimals" && key != "source")
        parse_fail("unknown meta field \"" + key + "\"");
    }
    if (m.contains("seed")) {
      if (!m["seed"].is_string()) parse_fail("meta.seed must be a string");
      inst.meta.seed = m["seed"].get<std::string>();
    }
    if (m.contains("decimals")) {
      if (!m["decimals"].is_number_integer()) parse_fail("meta.decimals must be an integer");
      inst.meta.decimals = m["decimals"].get<int>();
    }
    if (m.contains("source")) {
      if (!m["source"].is_string()) parse_fail("meta.source must be a string");
      inst.meta.source = m["source"].get<std::string>();
    }
  }
  return inst;
}

std::string write_problem(const SubsetSumInstance& instance) {
  ordered_json doc;
  doc["values"] = instance.values;
  doc["target"] = instance.target;
  if (instance.planted) doc["planted"] = *instance.planted;
  if (!instance.meta.empty()) {
    ordered_json m;
    if (!instance.meta.seed.empty()) m["seed"] = instance.meta.seed;
    if (instance.meta.decimals != 2) m["decimals"] = instance.meta.decimals;
    if (!instance.meta.source.empty()) m["source"] = instance.meta.source;
    doc["meta"] = m;
  }
  return doc.dump(2) + "\n";
}

SubsetSumInstance read_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_problem(ss.str());
}

void write_problem_file(const SubsetSumInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << write_problem(instance);
}

}  // namespace subsetsum
