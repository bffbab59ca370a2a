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

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lazybum/schema_catalog.hpp"
#include "lazybum/storage.hpp"

namespace lazybum {

// One directed traversal of an fk edge.
struct Hop {
  TableId from_table = 0;
  ColumnId from_column = 0;
  TableId to_table = 0;
  ColumnId to_column = 0;

  friend auto operator<=>(const Hop&, const Hop&) = default;
};

// Sequence of hops starting at the target table. The empty path denotes the
// target table itself. Paths order by length first, then hop by hop.
struct JoinPath {
  TableId origin = 0;
  std::vector<Hop> hops;
  // Every hop lands on the referenced table's primary key, so each instance
  // reaches at most one terminal row.
  bool determinate = true;

  TableId terminal() const { return hops.empty() ? origin : hops.back().to_table; }
  std::size_t length() const { return hops.size(); }
  bool empty() const { return hops.empty(); }
  bool visits(TableId table) const;
  JoinPath extended(const Hop& hop, const SchemaCatalog& catalog) const;
  JoinPath prefix(std::size_t length, const SchemaCatalog& catalog) const;

  friend bool operator==(const JoinPath& a, const JoinPath& b) {
    return a.origin == b.origin && a.hops == b.hops;
  }
  friend std::strong_ordering operator<=>(const JoinPath& a, const JoinPath& b) {
    if (auto c = a.origin <=> b.origin; c != 0) return c;
    if (auto c = a.hops.size() <=> b.hops.size(); c != 0) return c;
    return a.hops <=> b.hops;
  }
};

JoinPath root_path(const SchemaCatalog& catalog);

// `Professor->Course(PID)->Enrolled(CID)->Student(SID)`. A hop whose two
// join columns have different names renders as `Table(from=to)`.
std::string render_path(const JoinPath& path, const SchemaCatalog& catalog);

// Length-1 paths from the target table, continued through associative
// tables (which never terminate a path).
std::vector<JoinPath> initial_paths(const SchemaCatalog& catalog);

// Forward-only one-step extensions of `path`, with the same associative
// lookahead as initial_paths.
std::vector<JoinPath> candidate_extensions(const SchemaCatalog& catalog, const JoinPath& path);

// Every path reachable from initial_paths by repeated extension whose hop
// count is at most max_length, sorted.
std::vector<JoinPath> enumerate_paths(const SchemaCatalog& catalog, std::size_t max_length);

// Instrumentation shared by the lazy and eager engines.
struct JoinStats {
  // Index i counts key lookups performed while building paths of i hops.
  std::vector<std::uint64_t> lookups_by_length;
  std::set<JoinPath> materialized_paths;
  std::uint64_t features_materialized = 0;

  void record_lookups(std::size_t path_length, std::uint64_t count);
  std::uint64_t total_lookups() const;
  std::uint64_t lookups_from_length(std::size_t min_length) const;
  void merge(const JoinStats& other);
};

// Per-instance bags of terminal-table rows reached through a path, stored
// as a flat row array with offsets. Instances are target rows in
// increasing order.
class JoinInstantiation {
 public:
  JoinInstantiation() = default;
  JoinInstantiation(JoinPath path, std::vector<RowId> instances, std::vector<std::uint32_t> offsets,
                    std::vector<RowId> rows);

  const JoinPath& path() const { return path_; }
  std::size_t instance_count() const { return instances_.size(); }
  const std::vector<RowId>& instances() const { return instances_; }
  std::span<const RowId> bag(std::size_t position) const {
    return {rows_.data() + offsets_[position], rows_.data() + offsets_[position + 1]};
  }
  std::size_t total_rows() const { return rows_.size(); }
  std::optional<std::size_t> position_of(RowId instance) const;

 private:
  JoinPath path_;
  std::vector<RowId> instances_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<RowId> rows_;
};

// A shared instantiation seen through a subset of its positions; this is
// how child tree nodes reuse their ancestors' joins without recomputing.
class InstantiationView {
 public:
  InstantiationView() = default;
  explicit InstantiationView(std::shared_ptr<const JoinInstantiation> base);

  std::size_t size() const { return positions_.size(); }
  const JoinPath& path() const { return base_->path(); }
  RowId instance(std::size_t i) const { return base_->instances()[positions_[i]]; }
  std::span<const RowId> bag(std::size_t i) const { return base_->bag(positions_[i]); }
  // Keeps the rows at the given local indices, in that order.
  InstantiationView select(std::span<const std::uint32_t> local_indices) const;
  const std::shared_ptr<const JoinInstantiation>& base() const { return base_; }

 private:
  std::shared_ptr<const JoinInstantiation> base_;
  std::vector<std::uint32_t> positions_;
};

// Empty-path instantiation: every instance maps to the singleton bag of
// itself. Defaults to all target rows.
JoinInstantiation root_instantiation(const Database& db);
JoinInstantiation root_instantiation(const Database& db, std::span<const RowId> instances);

// Joins one more hop for the viewed instances. Multiplicities are kept (bag
// semantics). One lookup is recorded per source row.
JoinInstantiation extend_instantiation(const Database& db, const InstantiationView& view, const Hop& hop,
                                       const SchemaCatalog& catalog, JoinStats* stats = nullptr);

// Same, over an owned instantiation, optionally restricted to a sorted
// subset of its instances.
JoinInstantiation extend_instantiation(const Database& db, const JoinInstantiation& inst, const Hop& hop,
                                       const std::vector<RowId>* restrict_to = nullptr,
                                       JoinStats* stats = nullptr);

// Builds the instantiation of `path` for the given instances, hop by hop.
JoinInstantiation instantiate_path(const Database& db, const JoinPath& path, std::span<const RowId> instances,
                                   JoinStats* stats = nullptr);

// Instantiation of `path` built by extending its longest prefix present in
// `cache`; every intermediate instantiation is added to the cache. The cache
// must hold at least the root path.
InstantiationView materialize_path(const Database& db, const JoinPath& path,
                                   std::map<JoinPath, InstantiationView>& cache, JoinStats* stats = nullptr);

// Per-instance multisets of one attribute of the terminal table. Numeric
// values carry NaN for missing elements; categorical codes carry
// kMissingCode.
struct NumericMultisets {
  std::vector<std::uint32_t> offsets{0};
  std::vector<double> values;
  std::span<const double> at(std::size_t i) const {
    return {values.data() + offsets[i], values.data() + offsets[i + 1]};
  }
};

struct CategoricalMultisets {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::int32_t> codes;
  std::span<const std::int32_t> at(std::size_t i) const {
    return {codes.data() + offsets[i], codes.data() + offsets[i + 1]};
  }
};

NumericMultisets project_numeric(const Database& db, const InstantiationView& view, ColumnId attribute);
CategoricalMultisets project_categorical(const Database& db, const InstantiationView& view, ColumnId attribute);

}  // namespace lazybum
