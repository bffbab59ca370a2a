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

#include "lazybum/schema_catalog.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

void check_identifier(std::string_view what, std::string_view name) {
  if (name.empty()) throw ValidationError(std::string(what) + " name is empty");
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || std::string_view(".:(),=>\"").find(c) != std::string_view::npos) {
      throw ValidationError(std::string(what) + " name '" + std::string(name) +
                            "' contains a reserved character");
    }
  }
}

std::string_view kind_token(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::primary_key: return "pk";
    case ColumnKind::foreign_key: return "fk";
    case ColumnKind::numeric: return "num";
    case ColumnKind::categorical: return "cat";
  }
  return "?";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::optional<ColumnId> TableSchema::find_column(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return static_cast<ColumnId>(i);
  }
  return std::nullopt;
}

ColumnId TableSchema::primary_key() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].kind == ColumnKind::primary_key) return static_cast<ColumnId>(i);
  }
  throw ValidationError("table '" + name + "' has no primary key");
}

ColumnSpec parse_column_decl(std::string_view decl) {
  const auto colon = decl.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("column declaration '" + std::string(decl) + "' lacks ':type'");
  }
  ColumnSpec spec;
  spec.name = std::string(decl.substr(0, colon));
  const std::string_view type = decl.substr(colon + 1);
  if (type == "pk") {
    spec.kind = ColumnKind::primary_key;
  } else if (type == "num") {
    spec.kind = ColumnKind::numeric;
  } else if (type == "cat") {
    spec.kind = ColumnKind::categorical;
  } else if (type.starts_with("fk(") && type.ends_with(")")) {
    spec.kind = ColumnKind::foreign_key;
    const std::string_view ref = type.substr(3, type.size() - 4);
    const auto dot = ref.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == ref.size()) {
      throw ParseError("foreign key '" + std::string(decl) + "' must reference Table.Column");
    }
    spec.ref_table = std::string(ref.substr(0, dot));
    spec.ref_column = std::string(ref.substr(dot + 1));
    if (spec.ref_column.find_first_of("+,") != std::string::npos) {
      throw ValidationError("foreign key '" + std::string(decl) +
                            "': composite keys are not supported");
    }
  } else {
    throw ParseError("column '" + spec.name + "' has unknown type '" + std::string(type) + "'");
  }
  return spec;
}

std::string format_column_decl(const ColumnSpec& column) {
  if (column.kind == ColumnKind::foreign_key) {
    return column.name + ":fk(" + column.ref_table + "." + column.ref_column + ")";
  }
  return column.name + ":" + std::string(kind_token(column.kind));
}

SchemaCatalog SchemaCatalog::build(std::vector<TableSchema> tables, std::string_view target_table,
                                   std::string_view target_attribute) {
  SchemaCatalog cat;
  cat.tables_ = std::move(tables);

  std::set<std::string, std::less<>> names;
  for (const auto& t : cat.tables_) {
    check_identifier("table", t.name);
    if (!names.insert(t.name).second) throw ValidationError("duplicate table '" + t.name + "'");
    std::set<std::string, std::less<>> cols;
    std::size_t pks = 0;
    for (const auto& c : t.columns) {
      check_identifier("column", c.name);
      if (!cols.insert(c.name).second) {
        throw ValidationError("duplicate column '" + t.name + "." + c.name + "'");
      }
      if (c.kind == ColumnKind::primary_key) ++pks;
    }
    if (pks != 1) {
      throw ValidationError("table '" + t.name + "' must have exactly one primary key column (found " +
                            std::to_string(pks) + ")");
    }
  }

  for (std::size_t ti = 0; ti < cat.tables_.size(); ++ti) {
    const auto& t = cat.tables_[ti];
    for (std::size_t ci = 0; ci < t.columns.size(); ++ci) {
      const auto& c = t.columns[ci];
      if (c.kind != ColumnKind::foreign_key) continue;
      const std::string fk = t.name + "." + c.name + " -> " + c.ref_table + "." + c.ref_column;
      const auto ref = cat.find_table(c.ref_table);
      if (!ref) throw ValidationError("foreign key " + fk + " references unknown table");
      const auto& rt = cat.tables_[*ref];
      const auto rc = rt.find_column(c.ref_column);
      if (!rc) throw ValidationError("foreign key " + fk + " references unknown column");
      if (rt.columns[*rc].kind != ColumnKind::primary_key) {
        throw ValidationError("foreign key " + fk + " does not reference a primary key");
      }
      cat.fk_edges_.push_back({static_cast<TableId>(ti), static_cast<ColumnId>(ci), *ref, *rc});
    }
  }

  const auto target = cat.find_table(target_table);
  if (!target) throw ValidationError("target table '" + std::string(target_table) + "' does not exist");
  cat.target_table_ = *target;
  const auto attr = cat.tables_[*target].find_column(target_attribute);
  if (!attr) {
    throw ValidationError("target attribute '" + std::string(target_table) + "." +
                          std::string(target_attribute) + "' does not exist");
  }
  if (cat.tables_[*target].columns[*attr].kind != ColumnKind::categorical) {
    throw ValidationError("target attribute '" + std::string(target_attribute) + "' must be categorical");
  }
  cat.target_attribute_ = *attr;

  cat.neighbors_.assign(cat.tables_.size(), {});
  for (std::size_t e = 0; e < cat.fk_edges_.size(); ++e) {
    const auto& edge = cat.fk_edges_[e];
    cat.neighbors_[edge.table_a].push_back({edge.table_b, edge.col_a, edge.col_b, e});
    if (edge.table_a != edge.table_b) {
      cat.neighbors_[edge.table_b].push_back({edge.table_a, edge.col_b, edge.col_a, e});
    }
  }
  // Keep each adjacency list in fk-edge order regardless of which side the
  // table is on.
  for (auto& list : cat.neighbors_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Neighbor& a, const Neighbor& b) { return a.edge < b.edge; });
  }

  cat.depths_.assign(cat.tables_.size(), std::nullopt);
  std::deque<TableId> queue{cat.target_table_};
  cat.depths_[cat.target_table_] = 0;
  while (!queue.empty()) {
    const TableId t = queue.front();
    queue.pop_front();
    for (const auto& n : cat.neighbors_[t]) {
      if (!cat.depths_[n.table]) {
        cat.depths_[n.table] = *cat.depths_[t] + 1;
        queue.push_back(n.table);
      }
    }
  }
  for (std::size_t t = 0; t < cat.tables_.size(); ++t) {
    if (!cat.depths_[t]) cat.unreachable_.push_back(cat.tables_[t].name);
  }

  std::ostringstream canon;
  canon << "target=" << target_table << "." << target_attribute << ";";
  for (const auto& t : cat.tables_) {
    canon << t.name << "(";
    for (const auto& c : t.columns) canon << format_column_decl(c) << ",";
    canon << ");";
  }
  cat.fingerprint_ = fnv1a(canon.str());
  return cat;
}

SchemaCatalog SchemaCatalog::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("schema: top level must be an object");
  if (!doc.contains("target") || !doc["target"].is_string()) {
    throw ParseError("schema: missing string field 'target' (Table.Column)");
  }
  if (!doc.contains("tables") || !doc["tables"].is_array()) {
    throw ParseError("schema: missing array field 'tables'");
  }
  const std::string target = doc["target"].get<std::string>();
  const auto dot = target.find('.');
  if (dot == std::string::npos) throw ParseError("schema: target '" + target + "' must be Table.Column");

  std::vector<TableSchema> tables;
  for (const auto& jt : doc["tables"]) {
    if (!jt.is_object() || !jt.contains("name") || !jt["name"].is_string()) {
      throw ParseError("schema: every table needs a string 'name'");
    }
    TableSchema t;
    t.name = jt["name"].get<std::string>();
    if (jt.contains("file")) {
      if (!jt["file"].is_string()) throw ParseError("schema: table '" + t.name + "' has a non-string 'file'");
      t.source_file = jt["file"].get<std::string>();
    } else {
      t.source_file = t.name + ".csv";
    }
    if (!jt.contains("columns") || !jt["columns"].is_array()) {
      throw ParseError("schema: table '" + t.name + "' needs a 'columns' array");
    }
    for (const auto& jc : jt["columns"]) {
      if (!jc.is_string()) throw ParseError("schema: table '" + t.name + "' has a non-string column entry");
      t.columns.push_back(parse_column_decl(jc.get<std::string>()));
    }
    tables.push_back(std::move(t));
  }
  return build(std::move(tables), std::string_view(target).substr(0, dot),
               std::string_view(target).substr(dot + 1));
}

std::string SchemaCatalog::to_json() const {
  nlohmann::ordered_json doc;
  doc["target"] = table_name(target_table_) + "." + column(target_table_, target_attribute_).name;
  doc["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : tables_) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["file"] = t.source_file;
    jt["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) jt["columns"].push_back(format_column_decl(c));
    doc["tables"].push_back(std::move(jt));
  }
  return doc.dump(2) + "\n";
}

std::optional<TableId> SchemaCatalog::find_table(std::string_view name) const {
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i].name == name) return static_cast<TableId>(i);
  }
  return std::nullopt;
}

TableId SchemaCatalog::table_id(std::string_view name) const {
  if (auto id = find_table(name)) return *id;
  throw ValidationError("unknown table '" + std::string(name) + "'");
}

const std::vector<Neighbor>& SchemaCatalog::neighbors(std::string_view table) const {
  return neighbors_.at(table_id(table));
}

bool SchemaCatalog::is_associative(TableId table) const {
  std::size_t fks = 0;
  for (const auto& c : tables_.at(table).columns) {
    if (!c.is_key()) return false;
    if (c.kind == ColumnKind::foreign_key) ++fks;
  }
  return fks >= 2;
}

bool SchemaCatalog::is_associative(std::string_view table) const {
  return is_associative(table_id(table));
}

SchemaCatalog load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return SchemaCatalog::from_json(text.str());
}

std::map<std::string, std::uint32_t> table_depths(const SchemaCatalog& catalog) {
  std::map<std::string, std::uint32_t> out;
  for (std::size_t t = 0; t < catalog.table_count(); ++t) {
    if (auto d = catalog.depth(static_cast<TableId>(t))) out[catalog.table_name(static_cast<TableId>(t))] = *d;
  }
  return out;
}

}  // namespace lazybum
