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

#include "lazybum/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

constexpr double kNoGain = -std::numeric_limits<double>::infinity();

// Scores candidate partitions of one node. Reuses its buffers so the inner
// threshold sweep does not allocate.
class GainScorer {
 public:
  explicit GainScorer(std::span<const std::uint32_t> labels, std::size_t k)
      : k_(k), xlogx_(labels.size() + 1, 0.0), left_(k), right_(k) {
    // Weighted child entropy is (m log m - sum c log c) / n, so a table of
    // c log c keeps log calls out of the threshold sweep.
    for (std::size_t c = 2; c < xlogx_.size(); ++c) {
      xlogx_[c] = static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    std::vector<std::uint32_t> parent(k, 0);
    for (auto l : labels) ++parent[l];
    n_ = labels.size();
    parent_entropy_ = weighted_entropy(parent.data(), n_) / static_cast<double>(n_);
  }

  // Best routing of the undefined rows for one test; returns the gain and
  // sets `route`. kNoGain when neither routing leaves both sides nonempty.
  double score(const std::uint32_t* pass, const std::uint32_t* fail, const std::uint32_t* undef, Route& route) {
    std::uint64_t np = 0, nf = 0, nu = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      np += pass[i];
      nf += fail[i];
      nu += undef[i];
    }
    double g_fail = kNoGain;
    double g_pass = kNoGain;
    if (np > 0 && nf + nu > 0) {
      for (std::size_t i = 0; i < k_; ++i) {
        left_[i] = pass[i];
        right_[i] = fail[i] + undef[i];
      }
      g_fail = gain(np, nf + nu);
    }
    if (nu > 0 && np + nu > 0 && nf > 0) {
      for (std::size_t i = 0; i < k_; ++i) {
        left_[i] = pass[i] + undef[i];
        right_[i] = fail[i];
      }
      g_pass = gain(np + nu, nf);
    }
    if (g_pass > g_fail + kGainTieEpsilon || (g_fail == kNoGain && g_pass != kNoGain)) {
      route = Route::pass;
      return g_pass;
    }
    route = Route::fail;
    return g_fail;
  }

 private:
  double weighted_entropy(const std::uint32_t* counts, std::uint64_t total) const {
    double h = xlogx_[total];
    for (std::size_t i = 0; i < k_; ++i) h -= xlogx_[counts[i]];
    return h;
  }

  double gain(std::uint64_t nl, std::uint64_t nr) const {
    return parent_entropy_ -
           (weighted_entropy(left_.data(), nl) + weighted_entropy(right_.data(), nr)) / static_cast<double>(n_);
  }

  std::size_t k_;
  std::vector<double> xlogx_;
  std::uint64_t n_ = 0;
  double parent_entropy_ = 0.0;
  std::vector<std::uint32_t> left_;
  std::vector<std::uint32_t> right_;
};

void consider(std::optional<SplitCandidate>& best, double gain, SplitTest&& test) {
  if (gain == kNoGain) return;
  if (!best || gain > best->gain + kGainTieEpsilon) best = SplitCandidate{std::move(test), gain};
}

void scan_numeric(const FeatureColumn& col, std::span<const std::uint32_t> labels, std::size_t k, GainScorer& scorer,
                  std::optional<SplitCandidate>& best) {
  std::vector<std::uint32_t> undef(k, 0), defined(k, 0), pass(k, 0), fail(k, 0);
  std::vector<std::pair<double, std::uint32_t>> values;
  values.reserve(col.cells.size());
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    if (is_undefined(col.cells[i])) {
      ++undef[labels[i]];
    } else {
      values.emplace_back(col.cells[i], labels[i]);
      ++defined[labels[i]];
    }
  }
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    ++pass[values[i].second];
    if (!(values[i].first < values[i + 1].first)) continue;
    for (std::size_t c = 0; c < k; ++c) fail[c] = defined[c] - pass[c];
    Route route = Route::fail;
    const double gain = scorer.score(pass.data(), fail.data(), undef.data(), route);
    if (gain == kNoGain || (best && !(gain > best->gain + kGainTieEpsilon))) continue;
    SplitTest test;
    test.descriptor = col.descriptor;
    test.kind = TestKind::numeric_le;
    test.threshold = midpoint_threshold(values[i].first, values[i + 1].first);
    test.undefined_route = route;
    consider(best, gain, std::move(test));
  }
}

void scan_categorical(const FeatureColumn& col, const LocalDataTable& ldt, std::size_t k, GainScorer& scorer,
                      std::optional<SplitCandidate>& best, const std::vector<std::string>* dictionary) {
  std::vector<std::uint32_t> undef(k, 0), defined(k, 0), fail(k, 0);
  std::map<std::int32_t, std::vector<std::uint32_t>> by_value;
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    const auto l = ldt.labels[i];
    if (is_undefined(col.cells[i])) {
      ++undef[l];
      continue;
    }
    ++defined[l];
    auto& counts = by_value[static_cast<std::int32_t>(col.cells[i])];
    if (counts.empty()) counts.assign(k, 0);
    ++counts[l];
  }
  for (const auto& [code, pass] : by_value) {
    for (std::size_t c = 0; c < k; ++c) fail[c] = defined[c] - pass[c];
    Route route = Route::fail;
    const double gain = scorer.score(pass.data(), fail.data(), undef.data(), route);
    if (gain == kNoGain || (best && !(gain > best->gain + kGainTieEpsilon))) continue;
    SplitTest test;
    test.descriptor = col.descriptor;
    test.kind = TestKind::categorical_eq;
    test.value_code = code;
    if (dictionary) test.value = dictionary->at(static_cast<std::size_t>(code));
    test.undefined_route = route;
    consider(best, gain, std::move(test));
  }
}

void scan_boolean(const FeatureColumn& col, std::span<const std::uint32_t> labels, std::size_t k, GainScorer& scorer,
                  std::optional<SplitCandidate>& best) {
  std::vector<std::uint32_t> undef(k, 0), pass(k, 0), fail(k, 0);
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    const double cell = col.cells[i];
    if (is_undefined(cell)) {
      ++undef[labels[i]];
    } else if (cell != 0.0) {
      ++pass[labels[i]];
    } else {
      ++fail[labels[i]];
    }
  }
  Route route = Route::fail;
  const double gain = scorer.score(pass.data(), fail.data(), undef.data(), route);
  SplitTest test;
  test.descriptor = col.descriptor;
  test.kind = TestKind::boolean_true;
  test.undefined_route = route;
  consider(best, gain, std::move(test));
}

std::optional<SplitCandidate> best_split_impl(const LocalDataTable& ldt, std::size_t k, const Database* db) {
  if (ldt.size() == 0) return std::nullopt;
  GainScorer scorer(ldt.labels, k);
  std::optional<SplitCandidate> best;
  for (const auto& col : ldt.columns) {
    switch (col.kind) {
      case CellKind::numeric:
        scan_numeric(col, ldt.labels, k, scorer, best);
        break;
      case CellKind::categorical: {
        const std::vector<std::string>* dict = nullptr;
        if (db) dict = &db->categorical(col.descriptor.path.terminal(), *col.descriptor.attribute).dictionary;
        scan_categorical(col, ldt, k, scorer, best, dict);
        break;
      }
      case CellKind::boolean:
        scan_boolean(col, ldt.labels, k, scorer, best);
        break;
    }
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const Database& db, const LearnParams& params, JoinStats* stats)
      : db_(db), params_(params), stats_(stats), k_(db.class_names().size()) {}

  std::int32_t grow(LocalDataTable ldt, std::uint32_t depth, const std::set<JoinPath>& used) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(make_leaf(ldt, depth));
    const auto& counts = nodes_.back().class_counts;
    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if ((params_.max_depth && depth >= *params_.max_depth) || ldt.size() < params_.min_inst || pure) return index;

    auto cand = best_split_impl(ldt, k_, &db_);
    std::optional<LocalDataTable> extended;
    if (!cand || cand->gain <= params_.min_ig) {
      extended = extend_ldt(db_, ldt, params_.strategy, used, params_.features, stats_);
      if (!extended) return index;
      cand = best_split_impl(*extended, k_, &db_);
      if (!cand || cand->gain <= params_.min_ig) return index;
    }

    auto [left, right] = partition_ldt(extended ? *extended : ldt, cand->test);
    ldt = {};
    extended.reset();
    std::set<JoinPath> child_used = used;
    child_used.insert(cand->test.descriptor.path);
    nodes_[index].test = std::move(cand->test);
    const auto l = grow(std::move(left), depth + 1, child_used);
    nodes_[index].left = l;
    const auto r = grow(std::move(right), depth + 1, child_used);
    nodes_[index].right = r;
    return index;
  }

  std::vector<TreeNode> take_nodes() { return std::move(nodes_); }

 private:
  TreeNode make_leaf(const LocalDataTable& ldt, std::uint32_t depth) const {
    TreeNode node;
    node.depth = depth;
    node.class_counts.assign(k_, 0);
    for (auto l : ldt.labels) ++node.class_counts[l];
    node.predicted = static_cast<std::uint32_t>(
        std::max_element(node.class_counts.begin(), node.class_counts.end()) - node.class_counts.begin());
    return node;
  }

  const Database& db_;
  const LearnParams& params_;
  JoinStats* stats_;
  std::size_t k_;
  std::vector<TreeNode> nodes_;
};

Prediction make_prediction(const TreeNode& leaf) {
  Prediction p;
  p.class_code = leaf.predicted;
  double total = 0.0;
  for (auto c : leaf.class_counts) total += c;
  p.distribution.reserve(leaf.class_counts.size());
  for (auto c : leaf.class_counts) p.distribution.push_back(total > 0 ? c / total : 0.0);
  return p;
}

}  // namespace

void LearnParams::validate() const {
  if (min_inst < 1) throw ValidationError("min_inst must be at least 1");
  if (!(min_ig >= 0.0) || !std::isfinite(min_ig)) throw ValidationError("min_ig must be a finite value >= 0");
  if (!(features.domsize_rel >= 0.0 && features.domsize_rel <= 1.0)) {
    throw ValidationError("domsize_rel must lie in [0, 1]");
  }
}

std::optional<SplitCandidate> best_split(const LocalDataTable& ldt, std::size_t num_classes) {
  return best_split_impl(ldt, num_classes, nullptr);
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeModel::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max<std::size_t>(d, n.depth);
  return d;
}

TreeModel grow_tree(const Database& db, const LearnParams& params, JoinStats* stats) {
  const auto rows = db.labeled_target_rows();
  return grow_tree(db, rows, params, stats);
}

TreeModel grow_tree(const Database& db, std::span<const RowId> instances, const LearnParams& params, JoinStats* stats) {
  params.validate();
  return grow_tree_from(db, build_root_ldt(db, instances, params.features, stats), params, stats);
}

TreeModel grow_tree_from(const Database& db, LocalDataTable root, const LearnParams& params, JoinStats* stats) {
  params.validate();
  if (db.class_names().empty()) throw ValidationError("target attribute has no labeled values");
  TreeBuilder builder(db, params, stats);
  builder.grow(std::move(root), 0, {});

  TreeModel model;
  model.nodes = builder.take_nodes();
  model.catalog_fingerprint = db.catalog().fingerprint();
  model.params = params;
  model.class_names = db.class_names();
  for (const auto& n : model.nodes) {
    if (n.test) model.descriptors.push_back(n.test->descriptor);
  }
  std::sort(model.descriptors.begin(), model.descriptors.end());
  model.descriptors.erase(std::unique(model.descriptors.begin(), model.descriptors.end()), model.descriptors.end());
  return model;
}

Prediction predict(const TreeModel& model, const Database& db, RowId instance) {
  const auto& cat = db.catalog();
  if (cat.fingerprint() != model.catalog_fingerprint) {
    throw ModelError("database schema does not match the model's training schema");
  }
  if (instance >= db.row_count(cat.target_table())) throw ValidationError("target row out of range");

  // Bags for this instance, keyed by path; shared prefixes are joined once.
  std::map<JoinPath, std::vector<RowId>> bags;
  bags.emplace(root_path(cat), std::vector<RowId>{instance});
  auto bag_for = [&](const JoinPath& path) -> const std::vector<RowId>& {
    std::size_t have = path.length();
    while (!bags.count(path.prefix(have, cat))) --have;
    for (std::size_t i = have; i < path.length(); ++i) {
      const auto& from = bags.at(path.prefix(i, cat));
      const Hop& hop = path.hops[i];
      const auto& keys = db.key(hop.from_table, hop.from_column).codes;
      std::vector<RowId> next;
      for (RowId r : from) {
        const auto rows = db.rows_matching(hop.to_table, hop.to_column, keys[r]);
        next.insert(next.end(), rows.begin(), rows.end());
      }
      bags.emplace(path.prefix(i + 1, cat), std::move(next));
    }
    return bags.at(path);
  };

  std::size_t node = 0;
  while (!model.nodes.at(node).is_leaf()) {
    const auto& n = model.nodes[node];
    SplitTest test = *n.test;
    const double cell = evaluate_descriptor(db, test.descriptor, bag_for(test.descriptor.path));
    if (test.kind == TestKind::categorical_eq) {
      const auto code = db.categorical(test.descriptor.path.terminal(), *test.descriptor.attribute).code_of(test.value);
      test.value_code = code ? *code : kMissingCode;
    }
    node = static_cast<std::size_t>(goes_left(test, cell) ? n.left : n.right);
  }
  return make_prediction(model.nodes[node]);
}

Prediction predict_table(const TreeModel& model, std::span<const FeatureColumn> columns, std::size_t row) {
  std::size_t node = 0;
  while (!model.nodes.at(node).is_leaf()) {
    const auto& n = model.nodes[node];
    auto it = std::lower_bound(columns.begin(), columns.end(), n.test->descriptor,
                               [](const FeatureColumn& c, const FeatureDescriptor& d) { return c.descriptor < d; });
    if (it == columns.end() || it->descriptor != n.test->descriptor) {
      throw ValidationError("feature table lacks a column tested by the model");
    }
    node = static_cast<std::size_t>(goes_left(*n.test, it->cells.at(row)) ? n.left : n.right);
  }
  return make_prediction(model.nodes[node]);
}

}  // namespace lazybum
