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
#include <string>
#include <vector>

#include "lazybum/eager_onebm.hpp"
#include "lazybum/schema_catalog.hpp"
#include "lazybum/storage.hpp"

namespace lazybum::testing {

// Brute-force reference for the eager feature table: walks the schema on
// its own, joins with nested loops over raw string cells and aggregates
// naively (numeric statistics in exact integer arithmetic on the 0.25 grid
// used by random_micro_db).
struct OracleCell {
  enum class Kind { undefined, number, text } kind = Kind::undefined;
  double number = 0.0;
  std::string text;
};

// Feature name -> one cell per target row (raw table order).
using OracleTable = std::map<std::string, std::vector<OracleCell>>;

OracleTable oracle_features(const SchemaCatalog& catalog, const std::map<std::string, RawTable>& tables,
                            std::size_t max_path_len, std::size_t domsize_abs = 40, double domsize_rel = 0.2);

// First mismatch between `flat` and the oracle, or nullopt. Numeric cells
// are compared within `rel_tol` relative error, everything else exactly.
std::optional<std::string> compare_with_oracle(const Database& db, const FlatTable& flat, const OracleTable& oracle,
                                               double rel_tol = 1e-9);

}  // namespace lazybum::testing
