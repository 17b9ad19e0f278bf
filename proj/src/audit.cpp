#include "subsetsum/audit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "subsetsum/oracle.hpp"
#include "subsetsum/qubo.hpp"

namespace subsetsum {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void cell_fail(std::size_t row, std::size_t col, const std::string& what) {
  throw Error(Errc::ParseError, "cell (" + std::to_string(row) + "," + std::to_string(col) +
                                    "): " + what);
}

// Raw CSV split with RFC-style quoting; rows padded to rectangular shape.
std::vector<std::vector<std::string>> split_csv(const std::string& text, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  const std::size_t len = text.size();

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  while (i < len) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < len && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() || !row.empty()) end_row();
    } else if (c != '\r') {
      field.push_back(c);
    }
    ++i;
  }
  if (!field.empty() || !row.empty()) end_row();

  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  for (auto& r : rows) r.resize(width);
  return rows;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool is_absent_marker(const std::string& trimmed) {
  return trimmed.empty() || trimmed == "-" || trimmed == "\xE2\x80\x93" /* en dash */ ||
         trimmed == "\xE2\x80\x94" /* em dash */;
}

std::string strip_currency(const std::string& s) {
  static const std::vector<std::string> symbols = {"\xE2\x82\xAC" /* euro */, "$",
                                                   "\xC2\xA3" /* pound */, "\xC2\xA5" /* yen */};
  std::string out = s;
  for (const auto& sym : symbols) {
    for (std::size_t pos; (pos = out.find(sym)) != std::string::npos;) out.erase(pos, sym.size());
  }
  return out;
}

}  // namespace

Amount parse_amount(const std::string& text, const ParseOptions& opts, std::size_t row,
                    std::size_t col) {
  std::string s = strip_currency(strip_spaces(text));
  if (s.empty()) cell_fail(row, col, "no digits");

  bool negative = false;
  if (s.front() == '(' && s.back() == ')') {
    negative = true;
    s = s.substr(1, s.size() - 2);
  }
  if (!s.empty() && (s.front() == '-' || s.rfind("\xE2\x88\x92", 0) == 0 /* minus sign */)) {
    negative = !negative;
    s.erase(0, s.front() == '-' ? 1 : 3);
  }
  if (!s.empty() && s.front() == '+') s.erase(0, 1);

  std::string digits;
  std::string fraction;
  bool seen_decimal = false;
  for (char c : s) {
    if (c == opts.decimal_separator) {
      if (seen_decimal) cell_fail(row, col, "multiple decimal separators");
      seen_decimal = true;
      continue;
    }
    if (opts.thousands_separators.find(c) != std::string::npos) {
      if (seen_decimal) cell_fail(row, col, "thousands separator after decimal point");
      continue;
    }
    if (c < '0' || c > '9') cell_fail(row, col, std::string("unexpected character '") + c + "'");
    (seen_decimal ? fraction : digits).push_back(c);
  }
  if (digits.empty() && fraction.empty()) cell_fail(row, col, "no digits");
  if (static_cast<int>(fraction.size()) > opts.decimals)
    cell_fail(row, col, "more than " + std::to_string(opts.decimals) + " decimal digits");
  fraction.resize(static_cast<std::size_t>(opts.decimals), '0');

  WideInt value = 0;
  for (char c : digits + fraction) {
    value = value * 10 + (c - '0');
    if (value > static_cast<WideInt>(kMaxAmountMagnitude))
      throw Error(Errc::MagnitudeOverflow, "cell (" + std::to_string(row) + "," +
                                               std::to_string(col) + "): amount exceeds 2^50");
  }
  return negative ? -static_cast<Amount>(value) : static_cast<Amount>(value);
}

Table parse_table(const std::string& csv_text, const ParseOptions& opts) {
  if (opts.decimals < 0 || opts.decimals > 15)
    throw Error(Errc::BadConfig, "decimals must lie in [0, 15]");
  const auto raw = split_csv(csv_text, opts.delimiter);

  Table table;
  const std::size_t row_start = opts.header_row ? 1 : 0;
  const std::size_t col_start = opts.label_column ? 1 : 0;
  if (raw.size() <= row_start) return table;

  if (opts.header_row) {
    for (std::size_t c = col_start; c < raw[0].size(); ++c) table.col_labels.push_back(raw[0][c]);
  } else if (!raw.empty()) {
    table.col_labels.assign(raw[0].size() - col_start, "");
  }

  for (std::size_t r = row_start; r < raw.size(); ++r) {
    const auto& line = raw[r];
    table.row_labels.push_back(opts.label_column && !line.empty() ? line[0] : "");
    std::vector<std::optional<Amount>> cells;
    for (std::size_t c = col_start; c < line.size(); ++c) {
      std::string trimmed = strip_spaces(line[c]);
      if (is_absent_marker(trimmed)) {
        cells.emplace_back(std::nullopt);
      } else {
        cells.emplace_back(parse_amount(line[c], opts, r, c));
      }
    }
    table.cells.push_back(std::move(cells));
  }
  return table;
}

Table parse_table_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str(), opts);
}

namespace {

struct ScopeCells {
  std::vector<CellRef> refs;
  std::vector<Amount> values;
};

ScopeCells collect_scope(const Table& table, const ExtractOptions& opts) {
  ScopeCells out;
  if (opts.scope == Scope::kColumn) {
    if (opts.column >= table.cols())
      throw Error(Errc::BadReference, "column " + std::to_string(opts.column) + " out of range");
    for (std::size_t r = 0; r < table.rows(); ++r) {
      if (table.cells[r][opts.column]) {
        out.refs.push_back({r, opts.column});
        out.values.push_back(*table.cells[r][opts.column]);
      }
    }
  } else {
    for (std::size_t r = 0; r < table.rows(); ++r)
      for (std::size_t c = 0; c < table.cols(); ++c)
        if (table.cells[r][c]) {
          out.refs.push_back({r, c});
          out.values.push_back(*table.cells[r][c]);
        }
  }
  return out;
}

std::vector<SelectionMask> enumerate_subsets(const SubsetSumInstance& instance,
                                             const ExtractOptions& opts, std::size_t scope_cells,
                                             std::size_t cap, bool* cap_hit) {
  *cap_hit = false;
  switch (opts.engine) {
    case AuditEngine::kOracleAuto:
      if (scope_cells <= kMeetInMiddleMaxN) {
        auto res = meet_in_middle(instance, cap, /*include_empty=*/false);
        *cap_hit = res.cap_hit;
        return std::move(res.masks);
      }
      [[fallthrough]];
    case AuditEngine::kHopfield: {
      MultistartConfig mcfg = opts.hopfield;
      mcfg.collect_all = true;
      mcfg.cap = cap;
      auto report = multistart(instance, opts.descent, mcfg);
      std::vector<SelectionMask> masks;
      for (const auto& sol : report.solutions)
        masks.push_back(mask_from_indices(instance.n(), sol.indices));
      *cap_hit = report.verified_count > masks.size();
      return masks;
    }
    case AuditEngine::kEvolve: {
      EvolveConfig ecfg = opts.evolve;
      ecfg.cap = cap;
      auto report = subsetsum::evolve(instance, ecfg, FitnessMode::exact());
      std::vector<SelectionMask> masks;
      for (const auto& sol : report.solutions)
        masks.push_back(mask_from_indices(instance.n(), sol.indices));
      *cap_hit = report.verified_count > masks.size();
      return masks;
    }
  }
  return {};
}

}  // namespace

SumStructure extract_structure(const Table& table, const ExtractOptions& opts) {
  const auto scope = collect_scope(table, opts);
  if (scope.refs.size() < 2)
    throw Error(Errc::ScopeTooSmall, "scope holds fewer than 2 present cells");

  SumStructure structure;
  if (opts.scope == Scope::kColumn) {
    structure.source = "col:" + std::to_string(opts.column);
  } else {
    structure.source = "table";
  }

  const std::size_t n_others = scope.refs.size() - 1;
  for (std::size_t ti = 0; ti < scope.refs.size(); ++ti) {
    const Amount target = scope.values[ti];
    if (target == 0 && !opts.include_zero_targets) continue;

    std::vector<Amount> candidates;
    std::vector<CellRef> candidate_refs;
    candidates.reserve(n_others);
    for (std::size_t j = 0; j < scope.refs.size(); ++j) {
      if (j == ti) continue;
      candidates.push_back(scope.values[j]);
      candidate_refs.push_back(scope.refs[j]);
    }

    // Room for suppressed singletons plus one extra to detect truncation.
    std::size_t equal_cells = 0;
    if (!opts.include_singletons)
      for (auto v : candidates)
        if (v == target) ++equal_cells;
    const bool unbounded = opts.max_per_target == 0;
    const std::size_t cap = unbounded ? kDefaultEnumerationCap
                                      : opts.max_per_target + equal_cells + 1;

    auto instance = new_instance(candidates, target);
    bool cap_hit = false;
    auto masks = enumerate_subsets(instance, opts, scope.refs.size(), cap, &cap_hit);

    std::vector<SumRelation> found;
    for (const auto& mask : masks) {
      const auto indices = mask_indices(mask);
      if (!opts.include_singletons && indices.size() == 1) continue;
      // Solver-independent re-verification by exact summation.
      Amount sum = 0;
      for (auto i : indices) sum += candidates[i];
      if (sum != target) continue;
      SumRelation rel;
      rel.target = scope.refs[ti];
      for (auto i : indices) rel.components.push_back(candidate_refs[i]);
      rel.scope = opts.scope;
      found.push_back(std::move(rel));
    }

    bool truncated = cap_hit;
    if (!unbounded && found.size() > opts.max_per_target) {
      found.resize(opts.max_per_target);
      truncated = true;
    }
    for (auto& rel : found) {
      rel.truncated = truncated;
      structure.relations.push_back(std::move(rel));
    }
  }
  return structure;
}

ConsistencyReport check_structure(const SumStructure& structure, const Table& table,
                                  std::optional<std::size_t> retarget_column) {
  ConsistencyReport report;
  for (std::size_t idx = 0; idx < structure.relations.size(); ++idx) {
    const auto& rel = structure.relations[idx];
    auto resolve = [&](CellRef ref) -> CellRef {
      if (retarget_column) ref.col = *retarget_column;
      if (ref.row >= table.rows() || ref.col >= table.cols())
        throw Error(Errc::BadReference, "relation " + std::to_string(idx) + " references cell (" +
                                            std::to_string(ref.row) + "," +
                                            std::to_string(ref.col) + ") outside the table");
      return ref;
    };

    RelationCheck check;
    check.relation_index = idx;

    const auto target_ref = resolve(rel.target);
    bool applicable = table.cells[target_ref.row][target_ref.col].has_value();
    WideInt sum = 0;
    for (const auto& comp : rel.components) {
      const auto ref = resolve(comp);
      const auto& cell = table.cells[ref.row][ref.col];
      if (!cell) {
        applicable = false;
        break;
      }
      sum += *cell;
    }
    if (!applicable) {
      check.status = RelationStatus::kInapplicable;
    } else {
      const WideInt res = sum - *table.cells[target_ref.row][target_ref.col];
      if (res == 0) {
        check.status = RelationStatus::kHolds;
      } else {
        check.status = RelationStatus::kViolated;
        check.residual = static_cast<Amount>(res);
      }
    }
    report.checks.push_back(check);
  }
  return report;
}

std::string structure_to_json(const SumStructure& structure) {
  ordered_json doc;
  doc["source"] = structure.source;
  ordered_json rels = ordered_json::array();
  for (const auto& rel : structure.relations) {
    ordered_json r;
    r["target"] = {rel.target.row, rel.target.col};
    ordered_json comps = ordered_json::array();
    for (const auto& c : rel.components) comps.push_back({c.row, c.col});
    r["components"] = std::move(comps);
    r["truncated"] = rel.truncated;
    rels.push_back(std::move(r));
  }
  doc["relations"] = std::move(rels);
  return doc.dump(2) + "\n";
}

SumStructure structure_from_json(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("structure document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("source") || !doc.contains("relations"))
    throw Error(Errc::ParseError, "structure document: missing field");

  SumStructure structure;
  structure.source = doc["source"].get<std::string>();
  auto read_ref = [](const ordered_json& j) -> CellRef {
    if (!j.is_array() || j.size() != 2)
      throw Error(Errc::ParseError, "structure document: cell refs must be [row, col]");
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  };
  for (const auto& r : doc["relations"]) {
    SumRelation rel;
    rel.target = read_ref(r.at("target"));
    for (const auto& c : r.at("components")) rel.components.push_back(read_ref(c));
    if (rel.components.empty())
      throw Error(Errc::ParseError, "structure document: relation without components");
    if (r.contains("truncated")) rel.truncated = r["truncated"].get<bool>();
    bool one_column = rel.target.col == rel.components.front().col;
    for (const auto& c : rel.components) one_column = one_column && c.col == rel.target.col;
    rel.scope = one_column ? Scope::kColumn : Scope::kTable;
    structure.relations.push_back(std::move(rel));
  }
  return structure;
}

std::string consistency_to_json(const ConsistencyReport& report) {
  ordered_json doc = ordered_json::array();
  for (const auto& check : report.checks) {
    ordered_json c;
    c["relation_index"] = check.relation_index;
    switch (check.status) {
      case RelationStatus::kHolds: c["status"] = "holds"; break;
      case RelationStatus::kViolated: c["status"] = "violated"; break;
      case RelationStatus::kInapplicable: c["status"] = "inapplicable"; break;
    }
    if (check.status == RelationStatus::kViolated) c["residual"] = check.residual;
    doc.push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

}  // namespace subsetsum
