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
#include <map>
#include <string>

#include "lazybum/schema_catalog.hpp"
#include "lazybum/storage.hpp"

namespace lazybum::testing {

struct MicroOptions {
  std::size_t max_tables = 6;
  std::size_t max_rows = 200;
  std::size_t min_target_rows = 5;
  std::size_t max_target_rows = 80;
  double missing_rate = 0.1;
  double dangling_rate = 0.05;
};

// Random database: up to max_tables tables reachable from the target
// table "t0" (classes p/n/m), a mix of one-to-many, many-to-one and
// associative links, occasional parallel edges, numeric values on a 0.25
// grid and small categorical domains. Key cells are never missing.
struct MicroDb {
  SchemaCatalog catalog;
  std::map<std::string, RawTable> tables;
};

MicroDb random_micro_db(std::uint64_t seed, const MicroOptions& options = {});

}  // namespace lazybum::testing
