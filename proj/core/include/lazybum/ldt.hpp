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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "lazybum/features.hpp"
#include "lazybum/joinpath.hpp"
#include "lazybum/split.hpp"

namespace lazybum {

enum class Strategy : std::uint8_t { restricted, unrestricted };

// The local data table of one tree node. Columns accumulate on the way
// down from the root; the frontier holds paths not yet extended. Cached
// instantiations are restricted to this node's rows.
struct LocalDataTable {
  std::vector<RowId> instance_ids;   // increasing target rows
  std::vector<std::uint32_t> labels; // class codes, aligned with instance_ids
  std::vector<FeatureColumn> columns; // sorted by descriptor
  std::vector<JoinPath> frontier;     // sorted
  std::map<JoinPath, InstantiationView> instantiations;

  std::size_t size() const { return instance_ids.size(); }
  const FeatureColumn* find_column(const FeatureDescriptor& descriptor) const;
};

// Root table over the given labeled target rows: retained target-table
// attributes plus the features of every initial path, which form the
// frontier. Throws ValidationError when `instances` is empty.
LocalDataTable build_root_ldt(const Database& db, std::span<const RowId> instances, const FeatureParams& params,
                              JoinStats* stats = nullptr);
LocalDataTable build_root_ldt(const Database& db, const FeatureParams& params, JoinStats* stats = nullptr);

// Frontier paths that may be extended. Unrestricted: all of them.
// Restricted: initial paths, plus paths some ancestor split tested.
std::vector<JoinPath> eligible_paths(const LocalDataTable& ldt, Strategy strategy, const std::set<JoinPath>& used_paths,
                                     const SchemaCatalog& catalog);

// One extension round: every eligible path is replaced in the frontier by
// its candidate extensions, whose features are joined for this node's rows
// only and appended. Returns nullopt when no eligible path has a candidate
// extension. `ldt` is left unchanged.
std::optional<LocalDataTable> extend_ldt(const Database& db, const LocalDataTable& ldt, Strategy strategy,
                                         const std::set<JoinPath>& used_paths, const FeatureParams& params,
                                         JoinStats* stats = nullptr);

// Routes rows by `test` (undefined cells follow its stored route) into
// (pass, fail) children that inherit all columns, the frontier and
// restricted instantiation views. Throws ValidationError if a side would be
// empty or the test's feature is not in the table.
std::pair<LocalDataTable, LocalDataTable> partition_ldt(const LocalDataTable& ldt, const SplitTest& test);

// Rows of `ldt` restricted to the given local indices.
LocalDataTable select_rows(const LocalDataTable& ldt, std::span<const std::uint32_t> local_indices);

}  // namespace lazybum
