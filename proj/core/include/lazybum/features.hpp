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

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lazybum/joinpath.hpp"
#include "lazybum/storage.hpp"

namespace lazybum {

enum class Aggregator : std::uint8_t {
  identity,
  avg,
  stddev,
  variance,
  max,
  min,
  sum,
  count,
  distinct_count,
  contains,
  is_empty,
};

std::string_view aggregator_name(Aggregator agg);
std::optional<Aggregator> parse_aggregator(std::string_view name);

// How a feature cell is interpreted by split tests.
enum class CellKind : std::uint8_t { numeric, categorical, boolean };

// Identifies one feature: a join path, an attribute of its terminal table
// (absent for is_empty) and an aggregation. Descriptors are totally
// ordered: path, then attribute (absent first), then aggregator, then the
// contains value.
struct FeatureDescriptor {
  JoinPath path;
  std::optional<ColumnId> attribute;
  Aggregator aggregator = Aggregator::identity;
  std::string value;  // contains only

  friend bool operator==(const FeatureDescriptor& a, const FeatureDescriptor& b) {
    return a.path == b.path && a.attribute == b.attribute && a.aggregator == b.aggregator && a.value == b.value;
  }
  friend std::strong_ordering operator<=>(const FeatureDescriptor& a, const FeatureDescriptor& b) {
    if (auto c = a.path <=> b.path; c != 0) return c;
    if (auto c = a.attribute.has_value() <=> b.attribute.has_value(); c != 0) return c;
    if (a.attribute) {
      if (auto c = *a.attribute <=> *b.attribute; c != 0) return c;
    }
    if (auto c = a.aggregator <=> b.aggregator; c != 0) return c;
    return a.value.compare(b.value) <=> 0;
  }
};

CellKind cell_kind(const FeatureDescriptor& descriptor, const SchemaCatalog& catalog);

// `<path>.<attribute>:<aggregator>`, `<path>.<attribute>:contains=<value>`
// or `<path>.:is_empty`.
std::string feature_name(const FeatureDescriptor& descriptor, const SchemaCatalog& catalog);

// Cells are NaN when undefined. Categorical cells hold dictionary codes of
// the attribute; boolean cells hold 0 or 1.
struct FeatureColumn {
  FeatureDescriptor descriptor;
  CellKind kind = CellKind::numeric;
  std::vector<double> cells;
};

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_undefined(double cell) { return std::isnan(cell); }

struct FeatureParams {
  std::size_t domsize_abs = 40;
  double domsize_rel = 0.2;
};

// Order of the numeric aggregate vector.
inline constexpr std::array<Aggregator, 7> kNumericAggregators{
    Aggregator::avg, Aggregator::stddev, Aggregator::variance, Aggregator::max,
    Aggregator::min, Aggregator::sum,    Aggregator::count};

// Input elements that are NaN are missing markers. count covers the whole
// multiset; the other six use the non-missing elements and are undefined
// when there are none. Variance divides by n.
std::array<double, 7> aggregate_numeric(std::span<const double> values);

struct CategoricalAggregates {
  double count = kUndefined;
  double distinct_count = kUndefined;
  std::vector<double> contains;  // indexed by dictionary code; empty when not requested
};

// Input elements equal to kMissingCode are missing markers. Everything is
// undefined for an empty multiset; contains cells are also undefined when
// every element is missing.
CategoricalAggregates aggregate_categorical(std::span<const std::int32_t> codes, std::size_t domain_size,
                                            bool emit_contains);

// Contains-features are generated only for domains strictly below both the
// absolute bound and the relative bound times the table's row count.
bool contains_enabled(std::size_t domain_size, std::size_t table_rows, const FeatureParams& params);

// Schema-determined feature set of a path, sorted. The empty path yields
// identity features of the retained target-table attributes.
std::vector<FeatureDescriptor> descriptors_for_path(const Database& db, const JoinPath& path,
                                                    const FeatureParams& params);

// Materializes descriptors_for_path(view.path()) over the viewed instances.
std::vector<FeatureColumn> features_for_path(const Database& db, const InstantiationView& view,
                                             const FeatureParams& params, JoinStats* stats = nullptr);
std::vector<FeatureColumn> features_for_path(const Database& db, const JoinInstantiation& inst,
                                             const FeatureParams& params, JoinStats* stats = nullptr);

// Value of one feature for one instance whose bag at descriptor.path is
// `bag`. Contains values and categorical codes are resolved against `db`.
double evaluate_descriptor(const Database& db, const FeatureDescriptor& descriptor, std::span<const RowId> bag);

}  // namespace lazybum
