#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsetsum/anneal.hpp"
#include "subsetsum/common.hpp"
#include "subsetsum/hopfield.hpp"
#include "subsetsum/model.hpp"

namespace subsetsum {

struct Table {
  std::vector<std::vector<std::optional<Amount>>> cells;  // rectangular
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  std::size_t rows() const { return cells.size(); }
  std::size_t cols() const { return cells.empty() ? 0 : cells[0].size(); }
};

struct CellRef {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const CellRef&, const CellRef&) = default;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

enum class Scope { kColumn, kTable };

struct SumRelation {
  CellRef target;
  std::vector<CellRef> components;  // distinct, never containing target
  Scope scope = Scope::kColumn;
  bool truncated = false;  // more relations existed for this target than the cap
};

struct SumStructure {
  std::vector<SumRelation> relations;
  std::string source;
};

enum class RelationStatus { kHolds, kViolated, kInapplicable };

struct RelationCheck {
  std::size_t relation_index = 0;
  RelationStatus status = RelationStatus::kHolds;
  Amount residual = 0;  // component sum minus target, when violated
};

struct ConsistencyReport {
  std::vector<RelationCheck> checks;

  bool all_hold() const {
    for (const auto& c : checks)
      if (c.status == RelationStatus::kViolated) return false;
    return true;
  }
};

struct ParseOptions {
  char delimiter = ',';
  char decimal_separator = '.';
  std::string thousands_separators = ", ";
  int decimals = 2;
  bool header_row = true;   // first row holds column labels
  bool label_column = true; // first column holds row labels
};

enum class AuditEngine { kOracleAuto, kHopfield, kEvolve };

struct ExtractOptions {
  Scope scope = Scope::kColumn;
  std::size_t column = 0;  // for Scope::kColumn
  AuditEngine engine = AuditEngine::kOracleAuto;
  std::size_t max_per_target = 10;  // 0 = unbounded
  bool include_zero_targets = false;
  bool include_singletons = false;
  MultistartConfig hopfield;
  EvolveConfig evolve;
  DescentConfig descent;
};

/// CSV -> table of minor-unit amounts. "(...)" negates, empty/"-"/endash
/// cells are absent, currency symbols and thousands separators are stripped.
Table parse_table(const std::string& csv_text, const ParseOptions& opts = {});
Table parse_table_file(const std::string& path, const ParseOptions& opts = {});

/// Solves one subset-sum problem per present cell in scope (the cell as
/// target, every other present cell as a candidate component) and returns the
/// verified relations.
SumStructure extract_structure(const Table& table, const ExtractOptions& opts);

/// Re-evaluates a structure on a table. Column-scoped structures may be
/// re-targeted at another column index.
ConsistencyReport check_structure(const SumStructure& structure, const Table& table,
                                  std::optional<std::size_t> retarget_column = std::nullopt);

std::string structure_to_json(const SumStructure& structure);
SumStructure structure_from_json(const std::string& json_text);
std::string consistency_to_json(const ConsistencyReport& report);

/// Amount formatting/parsing used by the table reader ("1,234.56" <-> 123456).
Amount parse_amount(const std::string& text, const ParseOptions& opts, std::size_t row,
                    std::size_t col);

}  // namespace subsetsum
