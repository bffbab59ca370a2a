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

#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "lazybum/schema_catalog.hpp"
#include "lazybum/storage.hpp"

namespace lazybum::testing {

RawTable raw_table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows);

// Hand-checked school instance on the school schema:
//   P1 (Lupin) teaches C1 {S1,S2,S3} and C2 {S1,S4,S2}; P2 teaches C3 {S3};
//   P3 teaches nothing; P4 teaches C4 with no enrollments.
//   Grades: S1 80, S2 90, S3 missing, S4 60.
//   Movies: P1, P3 -> M1 (comedy); P2, P4 -> M2 (drama).
//   Labels: P1 yes, P2 no, P3 yes, P4 no.
std::map<std::string, RawTable> tiny_school_tables();
Database tiny_school(const LoadOptions& options = {});

// Catalog with only the target table T(id pk, x num, color cat, label cat).
SchemaCatalog single_table_catalog();

// Two forward chains T->A->A2->A3 and T->B->B2->B3, one row per target
// row at every level. Only A2.x and B3.z vary. Rows with A2.x = 1 are all
// "p"; among the others the label is "p" iff B3.z = 1. A tree must split on
// the A chain first; reaching B3 below that split needs the unrestricted
// strategy.
Database two_chain_database(std::size_t n = 40);

// Target row of the database whose primary key is `id`.
RowId target_row(const Database& db, const std::string& id);

}  // namespace lazybum::testing
