#include "subsetsum/qubo.hpp"

#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace subsetsum {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_dims(std::size_t have, std::size_t want) {
  if (have != want)
    throw Error(Errc::DimensionMismatch, "mask length " + std::to_string(have) +
                                             " does not match instance n=" + std::to_string(want));
}

std::int64_t narrow_x4(WideInt v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(Errc::MagnitudeOverflow,
                std::string(what) + " does not fit a 64-bit integer; model too large for export");
  return static_cast<std::int64_t>(v);
}

}  // namespace

QuboForm build_qubo(const SubsetSumInstance& instance) {
  QuboForm form;
  form.x = instance.values;
  form.t = instance.target;
  form.offset = -(static_cast<WideInt>(instance.target) * instance.target);
  return form;
}

IsingForm qubo_to_ising(const QuboForm& form) {
  IsingForm ising;
  ising.x = form.x;
  ising.t = form.t;
  ising.value_sum = std::accumulate(form.x.begin(), form.x.end(), std::int64_t{0});
  return ising;
}

std::int64_t subset_sum(const std::vector<Amount>& values, const SelectionMask& z) {
  check_dims(z.size(), values.size());
  std::int64_t sigma = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (z[i]) sigma += values[i];
  return sigma;
}

std::int64_t residual(const SubsetSumInstance& instance, const SelectionMask& z) {
  return subset_sum(instance.values, z) - instance.target;
}

WideInt energy_qubo(const QuboForm& form, const SelectionMask& z) {
  check_dims(z.size(), form.n());
  std::int64_t sigma = 0;
  for (std::size_t i = 0; i < form.x.size(); ++i)
    if (z[i]) sigma += form.x[i];
  const WideInt r = static_cast<WideInt>(sigma) - form.t;
  return r * r + form.offset;
}

WideInt energy_qubo(const SubsetSumInstance& instance, const SelectionMask& z) {
  const WideInt r = residual(instance, z);
  return r * r - static_cast<WideInt>(instance.target) * instance.target;
}

WideInt energy_ising_x4(const IsingForm& form, const SpinState& s) {
  check_dims(s.size(), form.n());
  std::int64_t u = 0;
  for (std::size_t i = 0; i < form.x.size(); ++i) u += s[i] > 0 ? form.x[i] : -form.x[i];
  // 4*(s'Qs + q's) = u^2 + 2(S-2T)u with u = x's.
  const auto uw = static_cast<WideInt>(u);
  return uw * uw + 2 * (static_cast<WideInt>(form.value_sum) - 2 * static_cast<WideInt>(form.t)) * uw;
}

bool verify(const SubsetSumInstance& instance, const SelectionMask& z, bool allow_empty) {
  if (residual(instance, z) != 0) return false;
  if (allow_empty) return true;
  for (auto b : z)
    if (b) return true;
  return false;
}

std::vector<std::vector<WideInt>> dense_p(const QuboForm& form) {
  const auto n = form.n();
  std::vector<std::vector<WideInt>> p(n, std::vector<WideInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = static_cast<WideInt>(form.x[i]) * form.x[j];
  return p;
}

std::vector<WideInt> dense_p_linear(const QuboForm& form) {
  std::vector<WideInt> p(form.n());
  for (std::size_t i = 0; i < form.n(); ++i)
    p[i] = static_cast<WideInt>(2) * form.t * form.x[i];
  return p;
}

WideInt energy_qubo_dense(const QuboForm& form, const SelectionMask& z) {
  check_dims(z.size(), form.n());
  const auto p = dense_p(form);
  const auto lin = dense_p_linear(form);
  WideInt e = 0;
  for (std::size_t i = 0; i < form.n(); ++i) {
    if (!z[i]) continue;
    for (std::size_t j = 0; j < form.n(); ++j)
      if (z[j]) e += p[i][j];
    e -= lin[i];
  }
  return e;
}

std::string export_ising_json(const IsingForm& form) {
  const auto n = form.n();
  ordered_json doc;
  doc["n"] = n;
  std::vector<std::int64_t> linear(n);
  for (std::size_t i = 0; i < n; ++i) linear[i] = narrow_x4(form.linear_x4(i), "linear coefficient");
  doc["linear"] = linear;

  ordered_json quad = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto v = narrow_x4(2 * form.coupling_x4(i, j), "coupling");
      quad.push_back({i, j, v});
    }
  doc["quadratic"] = std::move(quad);

  // Spin-invariant diagonal sum(x_i^2) folds into the constant so the file is
  // self-contained: E_qubo(z)*4 = sum quad*s*s + sum lin*s + const_shift_x4.
  WideInt diag = 0;
  for (auto v : form.x) diag += static_cast<WideInt>(v) * v;
  doc["const_shift_x4"] = narrow_x4(form.const_shift_x4() + diag, "const shift");
  return doc.dump(2) + "\n";
}

ExportedIsing read_ising_json(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("ising document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("linear") ||
      !doc.contains("quadratic") || !doc.contains("const_shift_x4"))
    throw Error(Errc::ParseError, "ising document: missing field");

  ExportedIsing model;
  model.n = doc["n"].get<std::size_t>();
  model.linear_x4 = doc["linear"].get<std::vector<std::int64_t>>();
  if (model.linear_x4.size() != model.n)
    throw Error(Errc::ParseError, "ising document: linear length != n");
  for (const auto& entry : doc["quadratic"]) {
    if (!entry.is_array() || entry.size() != 3)
      throw Error(Errc::ParseError, "ising document: quadratic entries must be [i, j, value]");
    ExportedIsing::Coupling c{entry[0].get<std::size_t>(), entry[1].get<std::size_t>(),
                              entry[2].get<std::int64_t>()};
    if (c.i >= c.j || c.j >= model.n)
      throw Error(Errc::ParseError, "ising document: coupling indices must satisfy i < j < n");
    model.quadratic_x4.push_back(c);
  }
  model.const_shift_x4 = doc["const_shift_x4"].get<std::int64_t>();
  return model;
}

}  // namespace subsetsum
