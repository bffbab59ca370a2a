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

#include <algorithm>
#include <cinttypes>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "lazybum/error.hpp"
#include "lazybum/tree.hpp"

namespace lazybum {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string qualified(const SchemaCatalog& cat, TableId t, ColumnId c) {
  return cat.table_name(t) + "." + cat.column(t, c).name;
}

std::pair<TableId, ColumnId> resolve_column(const SchemaCatalog& cat, const std::string& name) {
  const auto dot = name.find('.');
  if (dot == std::string::npos) throw ModelError("malformed column reference '" + name + "'");
  const auto table = cat.find_table(name.substr(0, dot));
  if (!table) throw ModelError("unknown table in '" + name + "'");
  const auto column = cat.table(*table).find_column(name.substr(dot + 1));
  if (!column) throw ModelError("unknown column '" + name + "'");
  return {*table, *column};
}

ordered_json descriptor_json(const FeatureDescriptor& d, const SchemaCatalog& cat) {
  ordered_json j;
  j["name"] = feature_name(d, cat);
  ordered_json hops = ordered_json::array();
  for (const auto& h : d.path.hops) {
    hops.push_back({{"from", qualified(cat, h.from_table, h.from_column)}, {"to", qualified(cat, h.to_table, h.to_column)}});
  }
  j["path"] = std::move(hops);
  if (d.attribute) {
    j["attribute"] = cat.column(d.path.terminal(), *d.attribute).name;
  } else {
    j["attribute"] = nullptr;
  }
  j["aggregator"] = std::string(aggregator_name(d.aggregator));
  if (d.aggregator == Aggregator::contains) j["value"] = d.value;
  return j;
}

FeatureDescriptor descriptor_from(const nlohmann::json& j, const SchemaCatalog& cat) {
  FeatureDescriptor d;
  JoinPath path = root_path(cat);
  for (const auto& h : j.at("path")) {
    const auto [ft, fc] = resolve_column(cat, h.at("from").get<std::string>());
    const auto [tt, tc] = resolve_column(cat, h.at("to").get<std::string>());
    if (ft != path.terminal()) throw ModelError("descriptor path is not contiguous");
    bool is_edge = false;
    for (const auto& n : cat.neighbors(ft)) {
      if (n.table == tt && n.local_column == fc && n.neighbor_column == tc) is_edge = true;
    }
    if (!is_edge) throw ModelError("descriptor hop does not follow a foreign key");
    path = path.extended(Hop{ft, fc, tt, tc}, cat);
  }
  d.path = std::move(path);
  if (!j.at("attribute").is_null()) {
    const auto name = j.at("attribute").get<std::string>();
    const auto col = cat.table(d.path.terminal()).find_column(name);
    if (!col) throw ModelError("unknown attribute '" + name + "'");
    d.attribute = *col;
  }
  const auto agg = parse_aggregator(j.at("aggregator").get<std::string>());
  if (!agg) throw ModelError("unknown aggregator");
  d.aggregator = *agg;
  if (d.aggregator == Aggregator::contains) d.value = j.at("value").get<std::string>();
  return d;
}

}  // namespace

std::string serialize_model(const TreeModel& model, const SchemaCatalog& catalog) {
  ordered_json doc;
  doc["format"] = "lazybum-tree";
  doc["version"] = kModelFormatVersion;
  doc["catalog_fingerprint"] = hex64(model.catalog_fingerprint);
  doc["target"] = qualified(catalog, catalog.target_table(), catalog.target_attribute());
  doc["classes"] = model.class_names;

  ordered_json params;
  if (model.params.max_depth) {
    params["max_depth"] = *model.params.max_depth;
  } else {
    params["max_depth"] = "inf";
  }
  params["min_inst"] = model.params.min_inst;
  params["min_ig"] = model.params.min_ig;
  params["strategy"] = model.params.strategy == Strategy::restricted ? "restricted" : "unrestricted";
  params["domsize_abs"] = model.params.features.domsize_abs;
  params["domsize_rel"] = model.params.features.domsize_rel;
  params["seed"] = model.params.seed;
  doc["params"] = std::move(params);

  ordered_json descriptors = ordered_json::array();
  for (const auto& d : model.descriptors) descriptors.push_back(descriptor_json(d, catalog));
  doc["descriptors"] = std::move(descriptors);

  ordered_json nodes = ordered_json::array();
  for (const auto& n : model.nodes) {
    ordered_json j;
    j["depth"] = n.depth;
    j["counts"] = n.class_counts;
    j["predicted"] = model.class_names.at(n.predicted);
    if (n.test) {
      const auto it = std::lower_bound(model.descriptors.begin(), model.descriptors.end(), n.test->descriptor);
      if (it == model.descriptors.end() || *it != n.test->descriptor) {
        throw ModelError("model descriptor table lacks a tested feature");
      }
      ordered_json t;
      t["descriptor"] = static_cast<std::size_t>(it - model.descriptors.begin());
      t["kind"] = std::string(test_kind_name(n.test->kind));
      if (n.test->kind == TestKind::numeric_le) t["threshold"] = n.test->threshold;
      if (n.test->kind == TestKind::categorical_eq) t["value"] = n.test->value;
      t["undefined_route"] = std::string(route_name(n.test->undefined_route));
      j["test"] = std::move(t);
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

TreeModel deserialize_model(std::string_view document, const SchemaCatalog& catalog) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "lazybum-tree") throw ModelError("not a lazybum model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelError("unsupported model format version " + std::to_string(version));
    }
    TreeModel model;
    const auto fp = doc.at("catalog_fingerprint").get<std::string>();
    model.catalog_fingerprint = std::stoull(fp, nullptr, 16);
    if (model.catalog_fingerprint != catalog.fingerprint()) {
      throw ModelError("model was trained on a different schema (fingerprint " + fp + ", schema " +
                       hex64(catalog.fingerprint()) + ")");
    }
    model.class_names = doc.at("classes").get<std::vector<std::string>>();
    if (model.class_names.empty()) throw ModelError("model lists no classes");

    const auto& p = doc.at("params");
    if (p.at("max_depth").is_string()) {
      if (p.at("max_depth").get<std::string>() != "inf") throw ModelError("bad max_depth");
    } else {
      model.params.max_depth = p.at("max_depth").get<std::size_t>();
    }
    model.params.min_inst = p.at("min_inst").get<std::size_t>();
    model.params.min_ig = p.at("min_ig").get<double>();
    const auto strategy = p.at("strategy").get<std::string>();
    if (strategy == "restricted") {
      model.params.strategy = Strategy::restricted;
    } else if (strategy == "unrestricted") {
      model.params.strategy = Strategy::unrestricted;
    } else {
      throw ModelError("unknown strategy '" + strategy + "'");
    }
    model.params.features.domsize_abs = p.at("domsize_abs").get<std::size_t>();
    model.params.features.domsize_rel = p.at("domsize_rel").get<double>();
    model.params.seed = p.at("seed").get<std::uint64_t>();

    for (const auto& d : doc.at("descriptors")) model.descriptors.push_back(descriptor_from(d, catalog));

    const auto class_code = [&](const std::string& name) -> std::uint32_t {
      for (std::size_t i = 0; i < model.class_names.size(); ++i) {
        if (model.class_names[i] == name) return static_cast<std::uint32_t>(i);
      }
      throw ModelError("unknown class '" + name + "'");
    };
    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw ModelError("model has no nodes");
    for (const auto& j : nodes) {
      TreeNode n;
      n.depth = j.at("depth").get<std::uint32_t>();
      n.class_counts = j.at("counts").get<std::vector<std::uint32_t>>();
      if (n.class_counts.size() != model.class_names.size()) throw ModelError("class count vector has wrong size");
      n.predicted = class_code(j.at("predicted").get<std::string>());
      if (j.contains("test")) {
        const auto& t = j.at("test");
        SplitTest test;
        test.descriptor = model.descriptors.at(t.at("descriptor").get<std::size_t>());
        const auto kind = t.at("kind").get<std::string>();
        if (kind == test_kind_name(TestKind::numeric_le)) {
          test.kind = TestKind::numeric_le;
          test.threshold = t.at("threshold").get<double>();
        } else if (kind == test_kind_name(TestKind::categorical_eq)) {
          test.kind = TestKind::categorical_eq;
          test.value = t.at("value").get<std::string>();
        } else if (kind == test_kind_name(TestKind::boolean_true)) {
          test.kind = TestKind::boolean_true;
        } else {
          throw ModelError("unknown test kind '" + kind + "'");
        }
        const auto route = t.at("undefined_route").get<std::string>();
        test.undefined_route = route == route_name(Route::pass) ? Route::pass : Route::fail;
        n.test = std::move(test);
        n.left = j.at("left").get<std::int32_t>();
        n.right = j.at("right").get<std::int32_t>();
      }
      model.nodes.push_back(std::move(n));
    }
    const auto count = static_cast<std::int32_t>(model.nodes.size());
    for (std::int32_t i = 0; i < count; ++i) {
      const auto& n = model.nodes[static_cast<std::size_t>(i)];
      if (n.test && (n.left <= i || n.right <= i || n.left >= count || n.right >= count)) {
        throw ModelError("node " + std::to_string(i) + " has invalid child indices");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace lazybum
