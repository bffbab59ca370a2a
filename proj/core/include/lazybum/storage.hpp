/*
 * Copyright 2026 The LazyBum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lazybum/schema_catalog.hpp"

namespace lazybum {

using RowId = std::uint32_t;
using KeyCode = std::int64_t;
inline constexpr std::int32_t kMissingCode = -1;

struct NumericColumn {
  std::vector<double> values;          // 0.0 where missing
  std::vector<std::uint8_t> missing;   // 1 = missing
};

struct CategoricalColumn {
  std::vector<std::int32_t> codes;     // kMissingCode where missing
  std::vector<std::string> dictionary; // code -> value, first-appearance order
  std::vector<std::uint8_t> missing;

  std::optional<std::int32_t> code_of(std::string_view value) const;
};

// Key values dictionary-coded through the database-wide key dictionary, so
// equal key strings in different tables share a code.
struct KeyColumn {
  std::vector<KeyCode> codes;
};

using ColumnData = std::variant<NumericColumn, CategoricalColumn, KeyColumn>;

// CSR index from key code to the sorted, duplicate-free rows holding it.
class KeyIndex {
 public:
  KeyIndex() = default;
  static KeyIndex build(std::span<const KeyCode> column, std::size_t key_domain);

  std::span<const RowId> rows(KeyCode key) const {
    if (key < 0 || static_cast<std::size_t>(key) + 1 >= offsets_.size()) return {};
    return {rows_.data() + offsets_[key], rows_.data() + offsets_[key + 1]};
  }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<RowId> rows_;
};

// Raw string cells of one table, header first.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct LoadOptions {
  std::vector<std::string> missing_tokens{"", "?"};
  // Drop target-table attributes other than the key columns and the target.
  bool strip_target_features = false;
};

struct LoadStats {
  std::map<std::string, std::size_t> rejected_rows;        // table -> rows with a missing key
  std::map<std::string, std::size_t> dangling_references;  // "Table.Column" -> FK values without a match
};

// Columnar, immutable in-memory database.
class Database {
 public:
  // `tables` maps table name to its raw cells; every catalog table must be
  // present.
  static Database build(SchemaCatalog catalog, const std::map<std::string, RawTable>& tables,
                        const LoadOptions& options = {});

  const SchemaCatalog& catalog() const { return catalog_; }
  std::size_t row_count(TableId table) const { return tables_.at(table).row_count; }

  // False for columns removed by strip_target_features.
  bool has_column(TableId table, ColumnId column) const;
  const ColumnData& column(TableId table, ColumnId column) const;
  const NumericColumn& numeric(TableId table, ColumnId column) const;
  const CategoricalColumn& categorical(TableId table, ColumnId column) const;
  const KeyColumn& key(TableId table, ColumnId column) const;

  // Rows of `table` whose `column` equals `key`; throws DataError when the
  // column carries no index.
  std::span<const RowId> rows_matching(TableId table, ColumnId column, KeyCode key) const;
  std::span<const RowId> rows_matching(std::string_view table, std::string_view column,
                                       std::string_view key) const;
  bool has_index(TableId table, ColumnId column) const;

  std::optional<KeyCode> key_code(std::string_view key) const;
  const std::string& key_string(KeyCode code) const { return key_strings_.at(code); }
  std::size_t key_domain() const { return key_strings_.size(); }

  // Target helpers. Class codes index class_names(); rows whose label is
  // missing carry kMissingCode.
  const std::vector<std::string>& class_names() const;
  std::int32_t label(RowId target_row) const;
  std::vector<RowId> labeled_target_rows() const;
  std::vector<RowId> all_target_rows() const;
  // Primary key string of a target row.
  const std::string& target_id(RowId target_row) const;
  std::optional<RowId> find_target_row(std::string_view id) const;

  const LoadStats& stats() const { return stats_; }

 private:
  struct TableData {
    std::size_t row_count = 0;
    std::vector<std::optional<ColumnData>> columns;
    std::vector<std::optional<KeyIndex>> indexes;
  };

  SchemaCatalog catalog_;
  std::vector<TableData> tables_;
  std::vector<std::string> key_strings_;
  std::unordered_map<std::string, KeyCode> key_codes_;
  LoadStats stats_;
};

// Reads every table's source_file (relative to data_dir) as CSV.
Database load_database(const SchemaCatalog& catalog, const std::filesystem::path& data_dir,
                       const LoadOptions& options = {});

// Writes each raw table to `dir/<source_file>` plus `dir/schema.json`.
void write_raw_database(const SchemaCatalog& catalog, const std::map<std::string, RawTable>& tables,
                        const std::filesystem::path& dir);

}  // namespace lazybum
