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

#include "lazybum/joinpath.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

bool is_forward(const SchemaCatalog& catalog, TableId from, TableId to) {
  const auto df = catalog.depth(from);
  const auto dt = catalog.depth(to);
  return df && dt && *dt > *df;
}

// Associative tables never terminate a path: keep walking through each of
// their forward neighbors.
void expand_lookahead(const SchemaCatalog& catalog, JoinPath path, std::vector<JoinPath>& out) {
  const TableId terminal = path.terminal();
  if (!catalog.is_associative(terminal)) {
    out.push_back(std::move(path));
    return;
  }
  for (const auto& n : catalog.neighbors(terminal)) {
    if (path.visits(n.table) || !is_forward(catalog, terminal, n.table)) continue;
    expand_lookahead(catalog, path.extended({terminal, n.local_column, n.table, n.neighbor_column}, catalog), out);
  }
}

std::shared_ptr<const JoinInstantiation> borrow(const JoinInstantiation& inst) {
  return std::shared_ptr<const JoinInstantiation>(std::shared_ptr<const void>(), &inst);
}

}  // namespace

bool JoinPath::visits(TableId table) const {
  if (origin == table) return true;
  return std::any_of(hops.begin(), hops.end(), [&](const Hop& h) { return h.to_table == table; });
}

JoinPath JoinPath::extended(const Hop& hop, const SchemaCatalog& catalog) const {
  if (hop.from_table != terminal()) {
    throw ValidationError("hop from '" + catalog.table_name(hop.from_table) + "' does not continue a path ending at '" +
                          catalog.table_name(terminal()) + "'");
  }
  JoinPath out = *this;
  out.hops.push_back(hop);
  out.determinate = determinate && hop.to_column == catalog.table(hop.to_table).primary_key();
  return out;
}

JoinPath JoinPath::prefix(std::size_t len, const SchemaCatalog& catalog) const {
  JoinPath out;
  out.origin = origin;
  for (std::size_t i = 0; i < len && i < hops.size(); ++i) out = out.extended(hops[i], catalog);
  return out;
}

JoinPath root_path(const SchemaCatalog& catalog) {
  JoinPath p;
  p.origin = catalog.target_table();
  return p;
}

std::string render_path(const JoinPath& path, const SchemaCatalog& catalog) {
  std::string out = catalog.table_name(path.origin);
  for (const auto& hop : path.hops) {
    const auto& from = catalog.column(hop.from_table, hop.from_column).name;
    const auto& to = catalog.column(hop.to_table, hop.to_column).name;
    out += "->" + catalog.table_name(hop.to_table) + "(";
    out += from == to ? to : from + "=" + to;
    out += ")";
  }
  return out;
}

std::vector<JoinPath> candidate_extensions(const SchemaCatalog& catalog, const JoinPath& path) {
  std::vector<JoinPath> out;
  const TableId terminal = path.terminal();
  for (const auto& n : catalog.neighbors(terminal)) {
    if (path.visits(n.table) || !is_forward(catalog, terminal, n.table)) continue;
    expand_lookahead(catalog, path.extended({terminal, n.local_column, n.table, n.neighbor_column}, catalog), out);
  }
  return out;
}

std::vector<JoinPath> initial_paths(const SchemaCatalog& catalog) {
  return candidate_extensions(catalog, root_path(catalog));
}

std::vector<JoinPath> enumerate_paths(const SchemaCatalog& catalog, std::size_t max_length) {
  std::set<JoinPath> seen;
  std::vector<JoinPath> work = initial_paths(catalog);
  while (!work.empty()) {
    JoinPath p = std::move(work.back());
    work.pop_back();
    if (p.length() > max_length || !seen.insert(p).second) continue;
    for (auto& ext : candidate_extensions(catalog, p)) {
      if (ext.length() <= max_length) work.push_back(std::move(ext));
    }
  }
  return {seen.begin(), seen.end()};
}

void JoinStats::record_lookups(std::size_t path_length, std::uint64_t count) {
  if (lookups_by_length.size() <= path_length) lookups_by_length.resize(path_length + 1, 0);
  lookups_by_length[path_length] += count;
}

std::uint64_t JoinStats::total_lookups() const {
  return std::accumulate(lookups_by_length.begin(), lookups_by_length.end(), std::uint64_t{0});
}

std::uint64_t JoinStats::lookups_from_length(std::size_t min_length) const {
  std::uint64_t total = 0;
  for (std::size_t i = min_length; i < lookups_by_length.size(); ++i) total += lookups_by_length[i];
  return total;
}

void JoinStats::merge(const JoinStats& other) {
  for (std::size_t i = 0; i < other.lookups_by_length.size(); ++i) record_lookups(i, other.lookups_by_length[i]);
  materialized_paths.insert(other.materialized_paths.begin(), other.materialized_paths.end());
  features_materialized += other.features_materialized;
}

JoinInstantiation::JoinInstantiation(JoinPath path, std::vector<RowId> instances, std::vector<std::uint32_t> offsets,
                                     std::vector<RowId> rows)
    : path_(std::move(path)), instances_(std::move(instances)), offsets_(std::move(offsets)), rows_(std::move(rows)) {
  if (offsets_.size() != instances_.size() + 1 || offsets_.back() != rows_.size()) {
    throw ValidationError("join instantiation offsets do not match its instances and rows");
  }
}

std::optional<std::size_t> JoinInstantiation::position_of(RowId instance) const {
  auto it = std::lower_bound(instances_.begin(), instances_.end(), instance);
  if (it == instances_.end() || *it != instance) return std::nullopt;
  return static_cast<std::size_t>(it - instances_.begin());
}

InstantiationView::InstantiationView(std::shared_ptr<const JoinInstantiation> base) : base_(std::move(base)) {
  positions_.resize(base_->instance_count());
  std::iota(positions_.begin(), positions_.end(), 0u);
}

InstantiationView InstantiationView::select(std::span<const std::uint32_t> local_indices) const {
  InstantiationView out;
  out.base_ = base_;
  out.positions_.reserve(local_indices.size());
  for (auto i : local_indices) out.positions_.push_back(positions_.at(i));
  return out;
}

JoinInstantiation root_instantiation(const Database& db) {
  const auto rows = db.all_target_rows();
  return root_instantiation(db, rows);
}

JoinInstantiation root_instantiation(const Database& db, std::span<const RowId> instances) {
  std::vector<RowId> ids(instances.begin(), instances.end());
  std::vector<std::uint32_t> offsets(ids.size() + 1);
  std::iota(offsets.begin(), offsets.end(), 0u);
  auto rows = ids;
  return JoinInstantiation(root_path(db.catalog()), std::move(ids), std::move(offsets), std::move(rows));
}

JoinInstantiation extend_instantiation(const Database& db, const InstantiationView& view, const Hop& hop,
                                       const SchemaCatalog& catalog, JoinStats* stats) {
  if (view.path().terminal() != hop.from_table) {
    throw ValidationError("cannot extend a path ending at '" + catalog.table_name(view.path().terminal()) +
                          "' with a hop from '" + catalog.table_name(hop.from_table) + "'");
  }
  JoinPath path = view.path().extended(hop, catalog);
  const auto& from_keys = db.key(hop.from_table, hop.from_column).codes;

  std::vector<RowId> instances;
  std::vector<std::uint32_t> offsets;
  std::vector<RowId> rows;
  instances.reserve(view.size());
  offsets.reserve(view.size() + 1);
  offsets.push_back(0);
  std::uint64_t lookups = 0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    instances.push_back(view.instance(i));
    for (RowId r : view.bag(i)) {
      const auto matches = db.rows_matching(hop.to_table, hop.to_column, from_keys[r]);
      rows.insert(rows.end(), matches.begin(), matches.end());
      ++lookups;
    }
    if (rows.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw DataError("join through " + render_path(path, catalog) + " exceeds 2^32 rows");
    }
    offsets.push_back(static_cast<std::uint32_t>(rows.size()));
  }
  if (stats) stats->record_lookups(path.length(), lookups);
  return JoinInstantiation(std::move(path), std::move(instances), std::move(offsets), std::move(rows));
}

JoinInstantiation extend_instantiation(const Database& db, const JoinInstantiation& inst, const Hop& hop,
                                       const std::vector<RowId>* restrict_to, JoinStats* stats) {
  InstantiationView view(borrow(inst));
  if (restrict_to) {
    std::vector<std::uint32_t> positions;
    positions.reserve(restrict_to->size());
    for (RowId id : *restrict_to) {
      const auto pos = inst.position_of(id);
      if (!pos) throw ValidationError("restricted instance " + std::to_string(id) + " is not in the instantiation");
      positions.push_back(static_cast<std::uint32_t>(*pos));
    }
    view = view.select(positions);
  }
  return extend_instantiation(db, view, hop, db.catalog(), stats);
}

JoinInstantiation instantiate_path(const Database& db, const JoinPath& path, std::span<const RowId> instances,
                                   JoinStats* stats) {
  JoinInstantiation inst = root_instantiation(db, instances);
  for (const auto& hop : path.hops) inst = extend_instantiation(db, inst, hop, nullptr, stats);
  return inst;
}

NumericMultisets project_numeric(const Database& db, const InstantiationView& view, ColumnId attribute) {
  const TableId table = view.path().terminal();
  if (db.catalog().column(table, attribute).is_key()) {
    throw ValidationError("cannot project key column '" + db.catalog().column(table, attribute).name + "'");
  }
  const auto& col = db.numeric(table, attribute);
  NumericMultisets out;
  out.offsets.reserve(view.size() + 1);
  for (std::size_t i = 0; i < view.size(); ++i) {
    for (RowId r : view.bag(i)) {
      out.values.push_back(col.missing[r] ? std::numeric_limits<double>::quiet_NaN() : col.values[r]);
    }
    out.offsets.push_back(static_cast<std::uint32_t>(out.values.size()));
  }
  return out;
}

CategoricalMultisets project_categorical(const Database& db, const InstantiationView& view, ColumnId attribute) {
  const TableId table = view.path().terminal();
  if (db.catalog().column(table, attribute).is_key()) {
    throw ValidationError("cannot project key column '" + db.catalog().column(table, attribute).name + "'");
  }
  const auto& col = db.categorical(table, attribute);
  CategoricalMultisets out;
  out.offsets.reserve(view.size() + 1);
  for (std::size_t i = 0; i < view.size(); ++i) {
    for (RowId r : view.bag(i)) out.codes.push_back(col.codes[r]);
    out.offsets.push_back(static_cast<std::uint32_t>(out.codes.size()));
  }
  return out;
}

InstantiationView materialize_path(const Database& db, const JoinPath& path,
                                   std::map<JoinPath, InstantiationView>& cache, JoinStats* stats) {
  const auto& cat = db.catalog();
  std::size_t have = path.length();
  while (!cache.count(path.prefix(have, cat))) {
    if (have == 0) throw ValidationError("no cached instantiation to extend " + render_path(path, cat));
    --have;
  }
  InstantiationView view = cache.at(path.prefix(have, cat));
  for (std::size_t i = have; i < path.length(); ++i) {
    auto next = std::make_shared<const JoinInstantiation>(extend_instantiation(db, view, path.hops[i], cat, stats));
    view = InstantiationView(std::move(next));
    cache.emplace(view.path(), view);
  }
  return view;
}

}  // namespace lazybum
