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

#include "lazybum/features.hpp"

#include <algorithm>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

constexpr std::array<std::string_view, 11> kAggregatorNames{
    "identity", "avg", "std", "var", "max", "min", "sum", "count", "distinct_count", "contains", "is_empty"};

std::size_t numeric_slot(Aggregator agg) {
  for (std::size_t i = 0; i < kNumericAggregators.size(); ++i) {
    if (kNumericAggregators[i] == agg) return i;
  }
  throw ValidationError("aggregator '" + std::string(aggregator_name(agg)) + "' is not numeric");
}

bool retained_attribute(const Database& db, const JoinPath& path, ColumnId c) {
  const auto& cat = db.catalog();
  const TableId t = path.terminal();
  if (cat.column(t, c).is_key() || !db.has_column(t, c)) return false;
  return !(path.empty() && c == cat.target_attribute());
}

double identity_numeric(std::span<const double> values) {
  if (values.empty() || std::isnan(values.front())) return kUndefined;
  return values.front();
}

double identity_categorical(std::span<const std::int32_t> codes) {
  if (codes.empty() || codes.front() == kMissingCode) return kUndefined;
  return static_cast<double>(codes.front());
}

}  // namespace

std::string_view aggregator_name(Aggregator agg) { return kAggregatorNames.at(static_cast<std::size_t>(agg)); }

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  for (std::size_t i = 0; i < kAggregatorNames.size(); ++i) {
    if (kAggregatorNames[i] == name) return static_cast<Aggregator>(i);
  }
  return std::nullopt;
}

CellKind cell_kind(const FeatureDescriptor& d, const SchemaCatalog& catalog) {
  switch (d.aggregator) {
    case Aggregator::contains:
    case Aggregator::is_empty:
      return CellKind::boolean;
    case Aggregator::identity:
      return catalog.column(d.path.terminal(), *d.attribute).kind == ColumnKind::categorical ? CellKind::categorical
                                                                                              : CellKind::numeric;
    default:
      return CellKind::numeric;
  }
}

std::string feature_name(const FeatureDescriptor& d, const SchemaCatalog& catalog) {
  std::string out = render_path(d.path, catalog) + ".";
  if (d.attribute) out += catalog.column(d.path.terminal(), *d.attribute).name;
  out += ":";
  out += aggregator_name(d.aggregator);
  if (d.aggregator == Aggregator::contains) out += "=" + d.value;
  return out;
}

std::array<double, 7> aggregate_numeric(std::span<const double> values) {
  std::array<double, 7> out;
  out.fill(kUndefined);
  if (values.empty()) return out;
  out[6] = static_cast<double>(values.size());

  std::size_t n = 0;
  double sum = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    if (n == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    sum += v;
    ++n;
  }
  if (n == 0) return out;
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : values) {
    if (!std::isnan(v)) sq += (v - mean) * (v - mean);
  }
  const double var = sq / static_cast<double>(n);
  out[0] = mean;
  out[1] = std::sqrt(var);
  out[2] = var;
  out[3] = hi;
  out[4] = lo;
  out[5] = sum;
  return out;
}

CategoricalAggregates aggregate_categorical(std::span<const std::int32_t> codes, std::size_t domain_size,
                                            bool emit_contains) {
  CategoricalAggregates out;
  if (emit_contains) out.contains.assign(domain_size, kUndefined);
  if (codes.empty()) return out;
  out.count = static_cast<double>(codes.size());

  std::vector<std::uint8_t> seen(domain_size, 0);
  std::size_t distinct = 0;
  for (auto c : codes) {
    if (c == kMissingCode) continue;
    const auto idx = static_cast<std::size_t>(c);
    if (idx >= domain_size) throw ValidationError("categorical code outside its dictionary");
    if (!seen[idx]) {
      seen[idx] = 1;
      ++distinct;
    }
  }
  out.distinct_count = static_cast<double>(distinct);
  if (emit_contains && distinct > 0) {
    for (std::size_t v = 0; v < domain_size; ++v) out.contains[v] = seen[v] ? 1.0 : 0.0;
  }
  return out;
}

bool contains_enabled(std::size_t domain_size, std::size_t table_rows, const FeatureParams& params) {
  return domain_size < params.domsize_abs &&
         static_cast<double>(domain_size) < params.domsize_rel * static_cast<double>(table_rows);
}

std::vector<FeatureDescriptor> descriptors_for_path(const Database& db, const JoinPath& path,
                                                    const FeatureParams& params) {
  const auto& cat = db.catalog();
  const TableId t = path.terminal();
  std::vector<FeatureDescriptor> out;
  if (!path.determinate) out.push_back({path, std::nullopt, Aggregator::is_empty, {}});
  for (ColumnId c = 0; c < cat.table(t).columns.size(); ++c) {
    if (!retained_attribute(db, path, c)) continue;
    if (path.determinate) {
      out.push_back({path, c, Aggregator::identity, {}});
      continue;
    }
    if (cat.column(t, c).kind == ColumnKind::numeric) {
      for (auto agg : kNumericAggregators) out.push_back({path, c, agg, {}});
      continue;
    }
    out.push_back({path, c, Aggregator::count, {}});
    out.push_back({path, c, Aggregator::distinct_count, {}});
    const auto& dict = db.categorical(t, c).dictionary;
    if (contains_enabled(dict.size(), db.row_count(t), params)) {
      for (const auto& v : dict) out.push_back({path, c, Aggregator::contains, v});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FeatureColumn> features_for_path(const Database& db, const InstantiationView& view,
                                             const FeatureParams& params, JoinStats* stats) {
  const auto& cat = db.catalog();
  const JoinPath& path = view.path();
  const TableId t = path.terminal();
  const std::size_t n = view.size();
  std::vector<FeatureColumn> out;

  auto make_column = [&](FeatureDescriptor d, CellKind kind) -> FeatureColumn& {
    out.push_back({std::move(d), kind, std::vector<double>(n, kUndefined)});
    return out.back();
  };

  if (!path.determinate) {
    auto& col = make_column({path, std::nullopt, Aggregator::is_empty, {}}, CellKind::boolean);
    for (std::size_t i = 0; i < n; ++i) col.cells[i] = view.bag(i).empty() ? 1.0 : 0.0;
  }

  for (ColumnId c = 0; c < cat.table(t).columns.size(); ++c) {
    if (!retained_attribute(db, path, c)) continue;
    if (cat.column(t, c).kind == ColumnKind::numeric) {
      const auto values = project_numeric(db, view, c);
      if (path.determinate) {
        auto& col = make_column({path, c, Aggregator::identity, {}}, CellKind::numeric);
        for (std::size_t i = 0; i < n; ++i) col.cells[i] = identity_numeric(values.at(i));
        continue;
      }
      const std::size_t first = out.size();
      for (auto agg : kNumericAggregators) make_column({path, c, agg, {}}, CellKind::numeric);
      for (std::size_t i = 0; i < n; ++i) {
        const auto aggs = aggregate_numeric(values.at(i));
        for (std::size_t k = 0; k < aggs.size(); ++k) out[first + k].cells[i] = aggs[k];
      }
      continue;
    }

    const auto codes = project_categorical(db, view, c);
    if (path.determinate) {
      auto& col = make_column({path, c, Aggregator::identity, {}}, CellKind::categorical);
      for (std::size_t i = 0; i < n; ++i) col.cells[i] = identity_categorical(codes.at(i));
      continue;
    }
    const auto& dict = db.categorical(t, c).dictionary;
    const bool with_contains = contains_enabled(dict.size(), db.row_count(t), params);
    const std::size_t first = out.size();
    make_column({path, c, Aggregator::count, {}}, CellKind::numeric);
    make_column({path, c, Aggregator::distinct_count, {}}, CellKind::numeric);
    if (with_contains) {
      for (const auto& v : dict) make_column({path, c, Aggregator::contains, v}, CellKind::boolean);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto aggs = aggregate_categorical(codes.at(i), dict.size(), with_contains);
      out[first].cells[i] = aggs.count;
      out[first + 1].cells[i] = aggs.distinct_count;
      for (std::size_t v = 0; v < aggs.contains.size(); ++v) out[first + 2 + v].cells[i] = aggs.contains[v];
    }
  }

  std::sort(out.begin(), out.end(),
            [](const FeatureColumn& a, const FeatureColumn& b) { return a.descriptor < b.descriptor; });
  if (stats) {
    stats->features_materialized += out.size();
    if (!path.empty()) stats->materialized_paths.insert(path);
  }
  return out;
}

std::vector<FeatureColumn> features_for_path(const Database& db, const JoinInstantiation& inst,
                                             const FeatureParams& params, JoinStats* stats) {
  InstantiationView view(std::shared_ptr<const JoinInstantiation>(std::shared_ptr<const void>(), &inst));
  return features_for_path(db, view, params, stats);
}

double evaluate_descriptor(const Database& db, const FeatureDescriptor& d, std::span<const RowId> bag) {
  if (d.aggregator == Aggregator::is_empty) return bag.empty() ? 1.0 : 0.0;
  if (!d.attribute) throw ValidationError("feature descriptor without attribute");
  const TableId t = d.path.terminal();
  const ColumnId c = *d.attribute;
  const auto& spec = db.catalog().column(t, c);

  if (spec.kind == ColumnKind::numeric) {
    const auto& col = db.numeric(t, c);
    std::vector<double> values;
    values.reserve(bag.size());
    for (RowId r : bag) values.push_back(col.missing[r] ? kUndefined : col.values[r]);
    if (d.aggregator == Aggregator::identity) return identity_numeric(values);
    return aggregate_numeric(values)[numeric_slot(d.aggregator)];
  }
  if (spec.kind != ColumnKind::categorical) throw ValidationError("feature on key column '" + spec.name + "'");

  const auto& col = db.categorical(t, c);
  std::vector<std::int32_t> codes;
  codes.reserve(bag.size());
  for (RowId r : bag) codes.push_back(col.codes[r]);
  switch (d.aggregator) {
    case Aggregator::identity:
      return identity_categorical(codes);
    case Aggregator::count:
      return aggregate_categorical(codes, col.dictionary.size(), false).count;
    case Aggregator::distinct_count:
      return aggregate_categorical(codes, col.dictionary.size(), false).distinct_count;
    case Aggregator::contains: {
      const auto aggs = aggregate_categorical(codes, col.dictionary.size(), true);
      if (is_undefined(aggs.distinct_count) || aggs.distinct_count == 0.0) return kUndefined;
      const auto code = col.code_of(d.value);
      return code ? aggs.contains[static_cast<std::size_t>(*code)] : 0.0;
    }
    default:
      throw ValidationError("aggregator '" + std::string(aggregator_name(d.aggregator)) +
                            "' does not apply to categorical attribute '" + spec.name + "'");
  }
}

}  // namespace lazybum
