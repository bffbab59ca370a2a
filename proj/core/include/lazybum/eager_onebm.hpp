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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lazybum/features.hpp"
#include "lazybum/joinpath.hpp"
#include "lazybum/ldt.hpp"
#include "lazybum/storage.hpp"

namespace lazybum {

struct EagerOptions {
  std::optional<std::size_t> max_path_len = 3;  // nullopt = every forward-only path
  FeatureParams features;
  // Cap on feature cells plus joined rows, in bytes; 0 disables the check.
  std::size_t memory_budget_bytes = 0;
};

// One row per target instance, one column per descriptor (sorted).
struct FlatTable {
  std::vector<RowId> instance_ids;    // ascending
  std::vector<std::int32_t> labels;   // class codes, kMissingCode when unlabeled
  std::vector<FeatureColumn> columns;

  std::size_t size() const { return instance_ids.size(); }
};

// Materializes the features of every path of length <= max_path_len plus
// the retained target attributes, for every target row. Throws BudgetError
// naming the path whose materialization crossed the memory budget.
FlatTable propositionalize(const Database& db, const EagerOptions& options, JoinStats* stats = nullptr);

// Paths propositionalize visits (the eager path universe).
std::vector<JoinPath> eager_paths(const SchemaCatalog& catalog, std::optional<std::size_t> max_path_len);

// Header: instance id column, feature names, target column. Categorical
// cells are written as their values and undefined cells as `missing_token`.
void export_flat_csv(const Database& db, const FlatTable& table, const std::filesystem::path& path,
                     const std::string& missing_token = "?");

// Tab-separated listing of every column: name, path, attribute, aggregator,
// contains value.
void write_manifest(std::ostream& out, std::span<const FeatureColumn> columns, const SchemaCatalog& catalog);

// Rows `rows` of a flat table as a local data table with an empty frontier,
// ready for grow_tree_from. Rows are taken in ascending order and must all
// be labeled.
LocalDataTable ldt_from_flat(const FlatTable& table, std::span<const std::uint32_t> rows);

}  // namespace lazybum
