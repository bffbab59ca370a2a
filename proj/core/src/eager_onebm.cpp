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

#include "lazybum/eager_onebm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "lazybum/csv.hpp"
#include "lazybum/error.hpp"

namespace lazybum {
namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<JoinPath> eager_paths(const SchemaCatalog& catalog, std::optional<std::size_t> max_path_len) {
  if (max_path_len && *max_path_len < 1) throw ValidationError("max_path_len must be at least 1");
  // A forward-only path visits each table at most once.
  return enumerate_paths(catalog, max_path_len ? *max_path_len : catalog.table_count());
}

FlatTable propositionalize(const Database& db, const EagerOptions& options, JoinStats* stats) {
  const auto paths = eager_paths(db.catalog(), options.max_path_len);
  FlatTable flat;
  flat.instance_ids = db.all_target_rows();
  flat.labels.reserve(flat.size());
  for (RowId r : flat.instance_ids) flat.labels.push_back(db.label(r));

  std::size_t used_bytes = 0;
  auto charge = [&](std::size_t bytes, const JoinPath& path) {
    used_bytes += bytes;
    if (options.memory_budget_bytes != 0 && used_bytes > options.memory_budget_bytes) {
      throw BudgetError("memory budget of " + std::to_string(options.memory_budget_bytes) +
                        " bytes exceeded while materializing " + render_path(path, db.catalog()));
    }
  };

  std::map<JoinPath, InstantiationView> cache;
  InstantiationView root(std::make_shared<const JoinInstantiation>(root_instantiation(db, flat.instance_ids)));
  cache.emplace(root.path(), root);
  flat.columns = features_for_path(db, root, options.features, stats);
  charge(flat.columns.size() * flat.size() * sizeof(double), root.path());

  for (const auto& path : paths) {
    InstantiationView view = materialize_path(db, path, cache, stats);
    charge(view.base()->total_rows() * sizeof(RowId), path);
    auto cols = features_for_path(db, view, options.features, stats);
    charge(cols.size() * flat.size() * sizeof(double), path);
    std::move(cols.begin(), cols.end(), std::back_inserter(flat.columns));
    // Only prefixes of longer paths stay useful.
    if (path.length() == options.max_path_len.value_or(SIZE_MAX)) cache.erase(path);
  }
  std::sort(flat.columns.begin(), flat.columns.end(),
            [](const FeatureColumn& a, const FeatureColumn& b) { return a.descriptor < b.descriptor; });
  return flat;
}

void export_flat_csv(const Database& db, const FlatTable& table, const std::filesystem::path& path,
                     const std::string& missing_token) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  const auto& cat = db.catalog();
  const auto& target = cat.table(cat.target_table());

  csv::Row header;
  header.push_back(target.columns.at(target.primary_key()).name);
  for (const auto& c : table.columns) header.push_back(feature_name(c.descriptor, cat));
  header.push_back(target.columns.at(cat.target_attribute()).name);
  csv::write_row(out, header);

  csv::Row row;
  for (std::size_t i = 0; i < table.size(); ++i) {
    row.clear();
    row.push_back(db.target_id(table.instance_ids[i]));
    for (const auto& c : table.columns) {
      const double cell = c.cells[i];
      if (is_undefined(cell)) {
        row.push_back(missing_token);
      } else if (c.kind == CellKind::categorical) {
        const auto& dict = db.categorical(c.descriptor.path.terminal(), *c.descriptor.attribute).dictionary;
        row.push_back(dict.at(static_cast<std::size_t>(cell)));
      } else {
        row.push_back(format_number(cell));
      }
    }
    const auto label = table.labels[i];
    row.push_back(label == kMissingCode ? missing_token : db.class_names().at(static_cast<std::size_t>(label)));
    csv::write_row(out, row);
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void write_manifest(std::ostream& out, std::span<const FeatureColumn> columns, const SchemaCatalog& catalog) {
  out << "feature\tpath\tattribute\taggregator\tvalue\n";
  for (const auto& c : columns) {
    const auto& d = c.descriptor;
    out << feature_name(d, catalog) << '\t' << render_path(d.path, catalog) << '\t'
        << (d.attribute ? catalog.column(d.path.terminal(), *d.attribute).name : std::string()) << '\t'
        << aggregator_name(d.aggregator) << '\t' << d.value << '\n';
  }
}

LocalDataTable ldt_from_flat(const FlatTable& table, std::span<const std::uint32_t> selected) {
  std::vector<std::uint32_t> rows(selected.begin(), selected.end());
  std::sort(rows.begin(), rows.end());
  LocalDataTable ldt;
  ldt.instance_ids.reserve(rows.size());
  ldt.labels.reserve(rows.size());
  for (auto r : rows) {
    if (table.labels.at(r) == kMissingCode) throw ValidationError("flat table row has no label");
    ldt.instance_ids.push_back(table.instance_ids[r]);
    ldt.labels.push_back(static_cast<std::uint32_t>(table.labels[r]));
  }
  ldt.columns.reserve(table.columns.size());
  for (const auto& c : table.columns) {
    FeatureColumn col{c.descriptor, c.kind, {}};
    col.cells.reserve(rows.size());
    for (auto r : rows) col.cells.push_back(c.cells[r]);
    ldt.columns.push_back(std::move(col));
  }
  return ldt;
}

}  // namespace lazybum
