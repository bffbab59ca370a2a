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

#include "lazybum/storage.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "lazybum/csv.hpp"
#include "lazybum/error.hpp"

namespace lazybum {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

std::optional<std::int32_t> CategoricalColumn::code_of(std::string_view value) const {
  for (std::size_t i = 0; i < dictionary.size(); ++i) {
    if (dictionary[i] == value) return static_cast<std::int32_t>(i);
  }
  return std::nullopt;
}

KeyIndex KeyIndex::build(std::span<const KeyCode> column, std::size_t key_domain) {
  KeyIndex index;
  index.offsets_.assign(key_domain + 1, 0);
  for (KeyCode k : column) ++index.offsets_[static_cast<std::size_t>(k) + 1];
  for (std::size_t i = 1; i < index.offsets_.size(); ++i) index.offsets_[i] += index.offsets_[i - 1];
  index.rows_.resize(column.size());
  std::vector<std::uint32_t> cursor(index.offsets_.begin(), index.offsets_.end() - 1);
  // Rows are visited in increasing order, so every bucket comes out sorted.
  for (std::size_t r = 0; r < column.size(); ++r) {
    index.rows_[cursor[static_cast<std::size_t>(column[r])]++] = static_cast<RowId>(r);
  }
  return index;
}

Database Database::build(SchemaCatalog catalog, const std::map<std::string, RawTable>& tables,
                         const LoadOptions& options) {
  Database db;
  db.catalog_ = std::move(catalog);
  const auto& cat = db.catalog_;
  const std::set<std::string, std::less<>> missing_tokens(options.missing_tokens.begin(),
                                                          options.missing_tokens.end());
  auto is_missing = [&](std::string_view cell) { return missing_tokens.count(cell) > 0; };
  auto intern_key = [&](std::string_view cell) -> KeyCode {
    auto it = db.key_codes_.find(std::string(cell));
    if (it != db.key_codes_.end()) return it->second;
    const KeyCode code = static_cast<KeyCode>(db.key_strings_.size());
    db.key_strings_.emplace_back(cell);
    db.key_codes_.emplace(std::string(cell), code);
    return code;
  };

  db.tables_.resize(cat.table_count());
  for (TableId t = 0; t < cat.table_count(); ++t) {
    const auto& schema = cat.table(t);
    const auto found = tables.find(schema.name);
    if (found == tables.end()) throw DataError("no data for table '" + schema.name + "'");
    const RawTable& raw = found->second;

    // Map schema columns onto header positions; the header must name
    // exactly the schema columns.
    std::vector<std::size_t> position(schema.columns.size());
    {
      std::set<std::string, std::less<>> seen;
      for (const auto& h : raw.header) {
        const auto name = trim(h);
        if (!seen.insert(std::string(name)).second) {
          throw DataError("table '" + schema.name + "': duplicate header column '" + std::string(name) + "'");
        }
        if (!schema.find_column(name)) {
          throw DataError("table '" + schema.name + "': header column '" + std::string(name) +
                          "' is not in the schema");
        }
      }
      for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        auto it = std::find_if(raw.header.begin(), raw.header.end(),
                               [&](const std::string& h) { return trim(h) == schema.columns[c].name; });
        if (it == raw.header.end()) {
          throw DataError("table '" + schema.name + "': header lacks column '" + schema.columns[c].name + "'");
        }
        position[c] = static_cast<std::size_t>(it - raw.header.begin());
      }
    }

    // Keep rows whose key cells are all present.
    std::vector<const std::vector<std::string>*> kept;
    std::size_t rejected = 0;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
      const auto& row = raw.rows[r];
      if (row.size() == 1 && raw.header.size() > 1 && trim(row[0]).empty()) continue;
      if (row.size() != raw.header.size()) {
        throw DataError("table '" + schema.name + "', row " + std::to_string(r + 1) + ": expected " +
                        std::to_string(raw.header.size()) + " fields, found " + std::to_string(row.size()));
      }
      bool ok = true;
      for (std::size_t c = 0; c < schema.columns.size() && ok; ++c) {
        if (schema.columns[c].is_key() && is_missing(trim(row[position[c]]))) ok = false;
      }
      if (ok) {
        kept.push_back(&row);
      } else {
        ++rejected;
      }
    }
    if (rejected) db.stats_.rejected_rows[schema.name] = rejected;

    TableData& data = db.tables_[t];
    data.row_count = kept.size();
    data.columns.resize(schema.columns.size());
    data.indexes.resize(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& spec = schema.columns[c];
      if (spec.is_key()) {
        KeyColumn col;
        col.codes.reserve(kept.size());
        for (const auto* row : kept) col.codes.push_back(intern_key(trim((*row)[position[c]])));
        data.columns[c] = std::move(col);
      } else if (spec.kind == ColumnKind::numeric) {
        NumericColumn col;
        col.values.reserve(kept.size());
        col.missing.reserve(kept.size());
        for (std::size_t r = 0; r < kept.size(); ++r) {
          const auto cell = trim((*kept[r])[position[c]]);
          double v = 0.0;
          if (is_missing(cell)) {
            col.values.push_back(0.0);
            col.missing.push_back(1);
          } else if (parse_number(cell, v)) {
            col.values.push_back(v);
            col.missing.push_back(0);
          } else {
            throw DataError("table '" + schema.name + "', column '" + spec.name + "', row " +
                            std::to_string(r + 1) + ": non-numeric value '" + std::string(cell) + "'");
          }
        }
        data.columns[c] = std::move(col);
      } else {
        CategoricalColumn col;
        std::unordered_map<std::string, std::int32_t> codes;
        col.codes.reserve(kept.size());
        col.missing.reserve(kept.size());
        for (const auto* row : kept) {
          const auto cell = trim((*row)[position[c]]);
          if (is_missing(cell)) {
            col.codes.push_back(kMissingCode);
            col.missing.push_back(1);
            continue;
          }
          auto [it, inserted] = codes.emplace(std::string(cell), static_cast<std::int32_t>(col.dictionary.size()));
          if (inserted) col.dictionary.emplace_back(cell);
          col.codes.push_back(it->second);
          col.missing.push_back(0);
        }
        data.columns[c] = std::move(col);
      }
    }
  }

  // Indexes are built once the key dictionary is complete.
  for (TableId t = 0; t < cat.table_count(); ++t) {
    const auto& schema = cat.table(t);
    auto& data = db.tables_[t];
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (!schema.columns[c].is_key()) continue;
      const auto& codes = std::get<KeyColumn>(*data.columns[c]).codes;
      data.indexes[c] = KeyIndex::build(codes, db.key_strings_.size());
    }
    const ColumnId pk = schema.primary_key();
    const auto& pk_codes = std::get<KeyColumn>(*data.columns[pk]).codes;
    for (KeyCode k : pk_codes) {
      if (data.indexes[pk]->rows(k).size() > 1) {
        throw DataError("table '" + schema.name + "': duplicate primary key '" + db.key_strings_[k] + "'");
      }
    }
  }

  for (const auto& edge : cat.fk_edges()) {
    const auto& fk = std::get<KeyColumn>(*db.tables_[edge.table_a].columns[edge.col_a]).codes;
    const auto& pk_index = *db.tables_[edge.table_b].indexes[edge.col_b];
    std::size_t dangling = 0;
    for (KeyCode k : fk) {
      if (pk_index.rows(k).empty()) ++dangling;
    }
    if (dangling) {
      db.stats_.dangling_references[cat.table_name(edge.table_a) + "." + cat.column(edge.table_a, edge.col_a).name] =
          dangling;
    }
  }

  if (options.strip_target_features) {
    const TableId t = cat.target_table();
    const auto& schema = cat.table(t);
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (!schema.columns[c].is_key() && c != cat.target_attribute()) db.tables_[t].columns[c].reset();
    }
  }
  return db;
}

bool Database::has_column(TableId table, ColumnId column) const {
  return tables_.at(table).columns.at(column).has_value();
}

const ColumnData& Database::column(TableId table, ColumnId column) const {
  const auto& col = tables_.at(table).columns.at(column);
  if (!col) {
    throw DataError("column '" + catalog_.table_name(table) + "." + catalog_.column(table, column).name +
                    "' is not loaded");
  }
  return *col;
}

const NumericColumn& Database::numeric(TableId table, ColumnId column) const {
  return std::get<NumericColumn>(this->column(table, column));
}

const CategoricalColumn& Database::categorical(TableId table, ColumnId column) const {
  return std::get<CategoricalColumn>(this->column(table, column));
}

const KeyColumn& Database::key(TableId table, ColumnId column) const {
  return std::get<KeyColumn>(this->column(table, column));
}

bool Database::has_index(TableId table, ColumnId column) const {
  return tables_.at(table).indexes.at(column).has_value();
}

std::span<const RowId> Database::rows_matching(TableId table, ColumnId column, KeyCode key) const {
  const auto& index = tables_.at(table).indexes.at(column);
  if (!index) {
    throw DataError("no key index on '" + catalog_.table_name(table) + "." + catalog_.column(table, column).name + "'");
  }
  return index->rows(key);
}

std::span<const RowId> Database::rows_matching(std::string_view table, std::string_view column,
                                               std::string_view key) const {
  const TableId t = catalog_.table_id(table);
  const auto c = catalog_.table(t).find_column(column);
  if (!c) throw ValidationError("unknown column '" + std::string(table) + "." + std::string(column) + "'");
  const auto code = key_code(key);
  if (!code) {
    if (!has_index(t, *c)) return rows_matching(t, *c, 0);
    return {};
  }
  return rows_matching(t, *c, *code);
}

std::optional<KeyCode> Database::key_code(std::string_view key) const {
  auto it = key_codes_.find(std::string(key));
  if (it == key_codes_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& Database::class_names() const {
  return categorical(catalog_.target_table(), catalog_.target_attribute()).dictionary;
}

std::int32_t Database::label(RowId target_row) const {
  return categorical(catalog_.target_table(), catalog_.target_attribute()).codes.at(target_row);
}

std::vector<RowId> Database::labeled_target_rows() const {
  const auto& codes = categorical(catalog_.target_table(), catalog_.target_attribute()).codes;
  std::vector<RowId> rows;
  for (std::size_t r = 0; r < codes.size(); ++r) {
    if (codes[r] != kMissingCode) rows.push_back(static_cast<RowId>(r));
  }
  return rows;
}

std::vector<RowId> Database::all_target_rows() const {
  std::vector<RowId> rows(row_count(catalog_.target_table()));
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = static_cast<RowId>(r);
  return rows;
}

const std::string& Database::target_id(RowId target_row) const {
  const TableId t = catalog_.target_table();
  return key_strings_.at(key(t, catalog_.table(t).primary_key()).codes.at(target_row));
}

std::optional<RowId> Database::find_target_row(std::string_view id) const {
  const auto code = key_code(id);
  if (!code) return std::nullopt;
  const TableId t = catalog_.target_table();
  const auto rows = rows_matching(t, catalog_.table(t).primary_key(), *code);
  if (rows.empty()) return std::nullopt;
  return rows.front();
}

Database load_database(const SchemaCatalog& catalog, const std::filesystem::path& data_dir,
                       const LoadOptions& options) {
  std::map<std::string, RawTable> raw;
  for (const auto& t : catalog.tables()) {
    const auto path = data_dir / t.source_file;
    if (!std::filesystem::exists(path)) throw DataError("missing data file " + path.string());
    auto records = csv::read_file(path);
    if (records.empty()) throw DataError(path.string() + ": empty file (no header)");
    RawTable table;
    table.header = std::move(records.front());
    table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    raw.emplace(t.name, std::move(table));
  }
  return Database::build(catalog, raw, options);
}

void write_raw_database(const SchemaCatalog& catalog, const std::map<std::string, RawTable>& tables,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : catalog.tables()) {
    const auto& raw = tables.at(t.name);
    std::ofstream out(dir / t.source_file, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / t.source_file).string());
    csv::write_row(out, raw.header);
    for (const auto& row : raw.rows) csv::write_row(out, row);
  }
  std::ofstream schema(dir / "schema.json");
  if (!schema) throw DataError("cannot write " + (dir / "schema.json").string());
  schema << catalog.to_json();
}

}  // namespace lazybum
