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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lazybum/ldt.hpp"

namespace lazybum {

struct LearnParams {
  std::optional<std::size_t> max_depth;  // nullopt = unbounded
  std::size_t min_inst = 3;
  double min_ig = 0.001;
  Strategy strategy = Strategy::restricted;
  FeatureParams features;
  std::uint64_t seed = 0;

  // Throws ValidationError for min_inst < 1, min_ig < 0 or domsize_rel
  // outside [0, 1].
  void validate() const;
};

struct SplitCandidate {
  SplitTest test;
  double gain = 0.0;
};

// Gains closer than this are ties; earlier candidates win ties.
inline constexpr double kGainTieEpsilon = 1e-12;

// Highest-gain test over every column of `ldt`. Candidates: midpoints of
// consecutive distinct defined values (numeric), one equality test per
// present value (categorical), the true-test (boolean). Undefined rows are
// merged into whichever side scores higher, fail on ties. Only tests that
// leave both sides nonempty qualify. Ties go to the earlier descriptor, then
// the lower threshold or value code.
std::optional<SplitCandidate> best_split(const LocalDataTable& ldt, std::size_t num_classes);

struct TreeNode {
  std::optional<SplitTest> test;  // absent for leaves
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<std::uint32_t> class_counts;  // training rows reaching the node
  std::uint32_t predicted = 0;              // majority class, lowest code on ties
  std::uint32_t depth = 0;

  bool is_leaf() const { return !test.has_value(); }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root; children follow in preorder
  std::uint64_t catalog_fingerprint = 0;
  LearnParams params;
  std::vector<std::string> class_names;
  std::vector<FeatureDescriptor> descriptors;  // sorted, every test descriptor

  std::size_t leaf_count() const;
  std::size_t depth() const;
};

struct Prediction {
  std::uint32_t class_code = 0;
  std::vector<double> distribution;
};

// Grows a tree over the labeled target rows (or the given subset). The root
// table holds length-1 path features; a node whose best gain does not
// exceed min_ig gets one extension round before it becomes a leaf.
TreeModel grow_tree(const Database& db, const LearnParams& params, JoinStats* stats = nullptr);
TreeModel grow_tree(const Database& db, std::span<const RowId> instances, const LearnParams& params,
                    JoinStats* stats = nullptr);

// Same recursion from an arbitrary root table. A table with an empty
// frontier is never extended, which turns this into a plain decision tree
// learner over a flat feature table.
TreeModel grow_tree_from(const Database& db, LocalDataTable root, const LearnParams& params,
                         JoinStats* stats = nullptr);

// Routes one target row of `db`, computing each tested feature on demand by
// joining the test's path for this row only. Throws ModelError when the
// database schema differs from the training schema.
Prediction predict(const TreeModel& model, const Database& db, RowId instance);

// Routes row `row` of materialized feature columns (sorted by descriptor)
// that include every tested feature, such as an eager flat table.
Prediction predict_table(const TreeModel& model, std::span<const FeatureColumn> columns, std::size_t row);

// Versioned JSON document; equal models serialize byte-identically.
std::string serialize_model(const TreeModel& model, const SchemaCatalog& catalog);
// Throws ParseError for malformed text and ModelError for an unsupported
// version or a schema fingerprint that does not match `catalog`.
TreeModel deserialize_model(std::string_view document, const SchemaCatalog& catalog);

inline constexpr int kModelFormatVersion = 1;

}  // namespace lazybum
