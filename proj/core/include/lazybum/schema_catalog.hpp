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
#include <string>
#include <string_view>
#include <vector>

namespace lazybum {

using TableId = std::uint32_t;
using ColumnId = std::uint32_t;

enum class ColumnKind : std::uint8_t { primary_key, foreign_key, numeric, categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // Set for foreign keys only.
  std::string ref_table;
  std::string ref_column;

  bool is_key() const {
    return kind == ColumnKind::primary_key || kind == ColumnKind::foreign_key;
  }
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSpec> columns;
  std::string source_file;

  std::optional<ColumnId> find_column(std::string_view column) const;
  ColumnId primary_key() const;
};

// One foreign-key relationship: table_a.col_a references table_b.col_b,
// where col_b is table_b's primary key.
struct FkEdge {
  TableId table_a = 0;
  ColumnId col_a = 0;
  TableId table_b = 0;
  ColumnId col_b = 0;
};

// An fk edge seen from one of its endpoints.
struct Neighbor {
  TableId table = 0;            // the table on the other side
  ColumnId local_column = 0;    // join column on the queried table
  ColumnId neighbor_column = 0; // join column on `table`
  std::size_t edge = 0;         // index into fk_edges()
};

// Validated, immutable description of a relational database. Holds the
// foreign-key graph and knows which column is the class.
class SchemaCatalog {
 public:
  // Validates every structural invariant and throws ValidationError naming
  // the offending element.
  static SchemaCatalog build(std::vector<TableSchema> tables, std::string_view target_table,
                             std::string_view target_attribute);

  // Parses the JSON schema document described in docs/schema_format.md.
  static SchemaCatalog from_json(std::string_view text);
  std::string to_json() const;

  const std::vector<TableSchema>& tables() const { return tables_; }
  const TableSchema& table(TableId id) const { return tables_.at(id); }
  std::size_t table_count() const { return tables_.size(); }
  std::optional<TableId> find_table(std::string_view name) const;
  TableId table_id(std::string_view name) const;  // throws ValidationError
  const std::string& table_name(TableId id) const { return tables_.at(id).name; }
  const ColumnSpec& column(TableId table, ColumnId column) const {
    return tables_.at(table).columns.at(column);
  }

  TableId target_table() const { return target_table_; }
  ColumnId target_attribute() const { return target_attribute_; }

  const std::vector<FkEdge>& fk_edges() const { return fk_edges_; }
  const std::vector<Neighbor>& neighbors(TableId table) const { return neighbors_.at(table); }
  const std::vector<Neighbor>& neighbors(std::string_view table) const;

  // Shortest hop distance from the target table over undirected fk edges;
  // nullopt for unreachable tables.
  std::optional<std::uint32_t> depth(TableId table) const { return depths_.at(table); }
  bool is_associative(TableId table) const;
  bool is_associative(std::string_view table) const;
  const std::vector<std::string>& unreachable_tables() const { return unreachable_; }

  // Stable hash of the logical schema (names, kinds, references, target);
  // source file names are excluded.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<TableSchema> tables_;
  TableId target_table_ = 0;
  ColumnId target_attribute_ = 0;
  std::vector<FkEdge> fk_edges_;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<std::optional<std::uint32_t>> depths_;
  std::vector<std::string> unreachable_;
  std::uint64_t fingerprint_ = 0;
};

SchemaCatalog load_schema(const std::filesystem::path& path);

// Depth of every reachable table, keyed by table name.
std::map<std::string, std::uint32_t> table_depths(const SchemaCatalog& catalog);

// Parses a column declaration of the form `name:pk`, `name:num`, `name:cat`
// or `name:fk(Table.Column)`.
ColumnSpec parse_column_decl(std::string_view decl);
std::string format_column_decl(const ColumnSpec& column);

}  // namespace lazybum
