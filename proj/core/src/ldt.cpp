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

#include "lazybum/ldt.hpp"

#include <algorithm>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

bool by_descriptor(const FeatureColumn& a, const FeatureColumn& b) { return a.descriptor < b.descriptor; }

}  // namespace

const FeatureColumn* LocalDataTable::find_column(const FeatureDescriptor& descriptor) const {
  auto it = std::lower_bound(columns.begin(), columns.end(), descriptor,
                             [](const FeatureColumn& c, const FeatureDescriptor& d) { return c.descriptor < d; });
  if (it == columns.end() || it->descriptor != descriptor) return nullptr;
  return &*it;
}

LocalDataTable build_root_ldt(const Database& db, std::span<const RowId> instances, const FeatureParams& params,
                              JoinStats* stats) {
  if (instances.empty()) throw ValidationError("target table '" + db.catalog().table_name(db.catalog().target_table()) +
                                               "' has no labeled rows");
  LocalDataTable ldt;
  ldt.instance_ids.assign(instances.begin(), instances.end());
  if (!std::is_sorted(ldt.instance_ids.begin(), ldt.instance_ids.end())) {
    std::sort(ldt.instance_ids.begin(), ldt.instance_ids.end());
  }
  ldt.labels.reserve(ldt.size());
  for (RowId r : ldt.instance_ids) {
    const auto label = db.label(r);
    if (label == kMissingCode) throw ValidationError("target row '" + db.target_id(r) + "' has no label");
    ldt.labels.push_back(static_cast<std::uint32_t>(label));
  }

  std::map<JoinPath, InstantiationView> cache;
  InstantiationView root(std::make_shared<const JoinInstantiation>(root_instantiation(db, ldt.instance_ids)));
  cache.emplace(root.path(), root);
  ldt.columns = features_for_path(db, root, params, stats);

  for (const auto& path : initial_paths(db.catalog())) {
    InstantiationView view = materialize_path(db, path, cache, stats);
    auto cols = features_for_path(db, view, params, stats);
    std::move(cols.begin(), cols.end(), std::back_inserter(ldt.columns));
    ldt.instantiations.emplace(path, view);
    ldt.frontier.push_back(path);
  }
  std::sort(ldt.columns.begin(), ldt.columns.end(), by_descriptor);
  std::sort(ldt.frontier.begin(), ldt.frontier.end());
  return ldt;
}

LocalDataTable build_root_ldt(const Database& db, const FeatureParams& params, JoinStats* stats) {
  const auto rows = db.labeled_target_rows();
  return build_root_ldt(db, rows, params, stats);
}

std::vector<JoinPath> eligible_paths(const LocalDataTable& ldt, Strategy strategy, const std::set<JoinPath>& used_paths,
                                     const SchemaCatalog& catalog) {
  if (strategy == Strategy::unrestricted) return ldt.frontier;
  const auto initial = initial_paths(catalog);
  const std::set<JoinPath> initial_set(initial.begin(), initial.end());
  std::vector<JoinPath> out;
  for (const auto& p : ldt.frontier) {
    if (used_paths.count(p) || initial_set.count(p)) out.push_back(p);
  }
  return out;
}

std::optional<LocalDataTable> extend_ldt(const Database& db, const LocalDataTable& ldt, Strategy strategy,
                                         const std::set<JoinPath>& used_paths, const FeatureParams& params,
                                         JoinStats* stats) {
  const auto& cat = db.catalog();
  const auto selected = eligible_paths(ldt, strategy, used_paths, cat);
  std::vector<std::pair<JoinPath, std::vector<JoinPath>>> plan;
  bool any = false;
  for (const auto& p : selected) {
    auto exts = candidate_extensions(cat, p);
    any = any || !exts.empty();
    plan.emplace_back(p, std::move(exts));
  }
  if (!any) return std::nullopt;

  LocalDataTable out = ldt;
  std::map<JoinPath, InstantiationView> cache = ldt.instantiations;
  for (const auto& [parent, exts] : plan) {
    for (const auto& ext : exts) {
      if (out.instantiations.count(ext)) continue;
      InstantiationView view = materialize_path(db, ext, cache, stats);
      auto cols = features_for_path(db, view, params, stats);
      std::move(cols.begin(), cols.end(), std::back_inserter(out.columns));
      out.instantiations.emplace(ext, view);
      out.frontier.push_back(ext);
    }
    out.frontier.erase(std::remove(out.frontier.begin(), out.frontier.end(), parent), out.frontier.end());
  }
  std::sort(out.columns.begin(), out.columns.end(), by_descriptor);
  std::sort(out.frontier.begin(), out.frontier.end());
  return out;
}

LocalDataTable select_rows(const LocalDataTable& ldt, std::span<const std::uint32_t> idx) {
  LocalDataTable child;
  child.instance_ids.reserve(idx.size());
  child.labels.reserve(idx.size());
  for (auto i : idx) {
    child.instance_ids.push_back(ldt.instance_ids[i]);
    child.labels.push_back(ldt.labels[i]);
  }
  child.columns.reserve(ldt.columns.size());
  for (const auto& col : ldt.columns) {
    FeatureColumn c{col.descriptor, col.kind, {}};
    c.cells.reserve(idx.size());
    for (auto i : idx) c.cells.push_back(col.cells[i]);
    child.columns.push_back(std::move(c));
  }
  child.frontier = ldt.frontier;
  for (const auto& [path, view] : ldt.instantiations) child.instantiations.emplace(path, view.select(idx));
  return child;
}

std::pair<LocalDataTable, LocalDataTable> partition_ldt(const LocalDataTable& ldt, const SplitTest& test) {
  const FeatureColumn* col = ldt.find_column(test.descriptor);
  if (!col) throw ValidationError("split test references a feature that is not in the local data table");
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  for (std::size_t i = 0; i < ldt.size(); ++i) {
    (goes_left(test, col->cells[i]) ? left : right).push_back(static_cast<std::uint32_t>(i));
  }
  if (left.empty() || right.empty()) throw ValidationError("split test leaves one side empty");
  return {select_rows(ldt, left), select_rows(ldt, right)};
}

}  // namespace lazybum
