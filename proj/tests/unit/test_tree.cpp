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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lazybum/eager_onebm.hpp"
#include "lazybum/error.hpp"
#include "lazybum/school.hpp"
#include "lazybum/tree.hpp"
#include "micro_db.hpp"

using namespace lazybum;

namespace {

FeatureColumn numeric_column(ColumnId attr, std::vector<double> cells) {
  FeatureColumn col;
  col.descriptor.attribute = attr;
  col.descriptor.aggregator = Aggregator::avg;
  col.kind = CellKind::numeric;
  col.cells = std::move(cells);
  return col;
}

LocalDataTable flat(std::vector<std::uint32_t> labels, std::vector<FeatureColumn> cols) {
  LocalDataTable ldt;
  for (RowId i = 0; i < labels.size(); ++i) ldt.instance_ids.push_back(i);
  ldt.labels = std::move(labels);
  ldt.columns = std::move(cols);
  return ldt;
}

bool tests_path(const TreeModel& m, const SchemaCatalog& c, const std::string& name) {
  for (const auto& n : m.nodes) {
    if (n.test && render_path(n.test->descriptor.path, c) == name) return true;
  }
  return false;
}

}  // namespace

TEST(Tree, BestSplitPerfectThreshold) {
  auto ldt = flat({0, 0, 1, 1}, {numeric_column(0, {1, 2, 3, 4})});
  auto s = best_split(ldt, 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->test.kind, TestKind::numeric_le);
  EXPECT_EQ(s->test.threshold, 2.5);
  EXPECT_DOUBLE_EQ(s->gain, 1.0);
}

TEST(Tree, ConstantColumnHasNoCandidate) {
  auto ldt = flat({0, 1, 0}, {numeric_column(0, {7, 7, 7})});
  EXPECT_FALSE(best_split(ldt, 2).has_value());
  auto undefined = flat({0, 1}, {numeric_column(0, {kUndefined, kUndefined})});
  EXPECT_FALSE(best_split(undefined, 2).has_value());
}

TEST(Tree, UndefinedRowsJoinTheBetterSide) {
  auto ldt = flat({0, 0, 1}, {numeric_column(0, {1, kUndefined, 3})});
  auto s = best_split(ldt, 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->test.threshold, 2.0);
  EXPECT_EQ(s->test.undefined_route, Route::pass);
  EXPECT_NEAR(s->gain, 0.918296, 1e-6);

  // Mirror image: the undefined row belongs with the fail side.
  auto mirror = flat({0, 1, 1}, {numeric_column(0, {1, kUndefined, 3})});
  auto m = best_split(mirror, 2);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->test.undefined_route, Route::fail);
  EXPECT_NEAR(m->gain, 0.918296, 1e-6);
}

TEST(Tree, UndefinedRouteTiesGoToFail) {
  // Pass and fail routing give the same gain.
  auto ldt = flat({0, 1, 0, 1}, {numeric_column(0, {1, kUndefined, 3, kUndefined})});
  auto s = best_split(ldt, 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->test.undefined_route, Route::fail);
}

TEST(Tree, TiesGoToEarlierDescriptorAndLowerThreshold) {
  auto ldt = flat({0, 0, 1, 1}, {numeric_column(0, {1, 2, 3, 4}), numeric_column(1, {1, 2, 3, 4})});
  auto s = best_split(ldt, 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->test.descriptor.attribute, 0u);
  // 1.5 and 3.5 give the same gain here; the lower threshold wins.
  auto sym = flat({0, 1, 1, 0}, {numeric_column(0, {1, 2, 3, 4})});
  auto t = best_split(sym, 2);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->test.threshold, 1.5);
}

TEST(Tree, CategoricalAndBooleanCandidates) {
  FeatureColumn cat;
  cat.descriptor.attribute = 0;
  cat.descriptor.aggregator = Aggregator::identity;
  cat.kind = CellKind::categorical;
  cat.cells = {2, 2, 0, 1};
  auto s = best_split(flat({1, 1, 0, 0}, {cat}), 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->test.kind, TestKind::categorical_eq);
  EXPECT_EQ(s->test.value_code, 2);
  EXPECT_DOUBLE_EQ(s->gain, 1.0);

  FeatureColumn b;
  b.descriptor.aggregator = Aggregator::is_empty;
  b.kind = CellKind::boolean;
  b.cells = {1, 0, 1, 0};
  auto bs = best_split(flat({0, 1, 0, 1}, {b}), 2);
  ASSERT_TRUE(bs);
  EXPECT_EQ(bs->test.kind, TestKind::boolean_true);
}

TEST(Tree, GainMatchesExhaustiveSearch) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    std::vector<std::uint32_t> labels(n);
    std::vector<double> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = rng() % 3;
      cells[i] = rng() % 4 == 0 ? kUndefined : static_cast<double>(rng() % 5);
    }
    auto s = best_split(flat(labels, {numeric_column(0, cells)}), 3);
    double best = -1;
    for (int t2 = 0; t2 < 5; ++t2) {
      const double thr = t2 + 0.5;
      for (Route r : {Route::pass, Route::fail}) {
        std::vector<std::uint32_t> l(3), rr(3);
        for (std::size_t i = 0; i < n; ++i) {
          const bool left = std::isnan(cells[i]) ? r == Route::pass : cells[i] <= thr;
          (left ? l : rr)[labels[i]]++;
        }
        const auto nl = l[0] + l[1] + l[2], nr = rr[0] + rr[1] + rr[2];
        bool has_pass = false, has_fail = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (!std::isnan(cells[i])) (cells[i] <= thr ? has_pass : has_fail) = true;
        }
        if (nl == 0 || nr == 0 || !has_pass || !has_fail) continue;
        best = std::max(best, information_gain(l, rr));
      }
    }
    if (best < 0) {
      EXPECT_FALSE(s.has_value()) << trial;
    } else {
      ASSERT_TRUE(s.has_value()) << trial;
      EXPECT_NEAR(s->gain, best, 1e-12) << trial;
    }
  }
}

TEST(Tree, SufficientTargetAttributeNeedsNoDeepJoins) {
  auto db = lazybum::testing::tiny_school();
  LearnParams p;
  p.min_inst = 2;
  JoinStats stats;
  auto m = grow_tree(db, p, &stats);
  EXPECT_EQ(m.depth(), 1u);
  EXPECT_EQ(m.leaf_count(), 2u);
  ASSERT_TRUE(m.nodes[0].test);
  EXPECT_TRUE(m.nodes[0].test->descriptor.path.empty());
  EXPECT_EQ(stats.lookups_from_length(2), 0u);
}

TEST(Tree, MaxDepthZeroIsMajorityLeaf) {
  auto db = lazybum::testing::two_chain_database(40);
  LearnParams p;
  p.max_depth = 0;
  auto m = grow_tree(db, p);
  ASSERT_EQ(m.nodes.size(), 1u);
  EXPECT_TRUE(m.nodes[0].is_leaf());
  EXPECT_EQ(m.class_names[m.nodes[0].predicted], "p");
  EXPECT_EQ(m.nodes[0].class_counts, (std::vector<std::uint32_t>{30, 10}));
}

TEST(Tree, MinInstStopsSmallNodes) {
  auto db = lazybum::testing::tiny_school();
  LearnParams p;
  p.min_inst = 5;
  EXPECT_EQ(grow_tree(db, p).nodes.size(), 1u);
}

TEST(Tree, MajorityTieGoesToLowestCode) {
  auto db = lazybum::testing::tiny_school();
  LearnParams p;
  p.max_depth = 0;
  auto m = grow_tree(db, p);
  EXPECT_EQ(m.nodes[0].predicted, 0u);
}

TEST(Tree, UnrestrictedReachesSiblingChain) {
  auto db = lazybum::testing::two_chain_database(40);
  const auto& c = db.catalog();
  LearnParams p;
  p.strategy = Strategy::restricted;
  auto restricted = grow_tree(db, p);
  p.strategy = Strategy::unrestricted;
  auto unrestricted = grow_tree(db, p);

  EXPECT_TRUE(tests_path(restricted, c, "T->A(id=tid)->A2(aid)"));
  EXPECT_FALSE(tests_path(restricted, c, "T->B(id=tid)->B2(bid)->B3(b2id)"));
  EXPECT_EQ(restricted.leaf_count(), 2u);

  EXPECT_TRUE(tests_path(unrestricted, c, "T->B(id=tid)->B2(bid)->B3(b2id)"));
  EXPECT_EQ(unrestricted.leaf_count(), 3u);
  std::size_t correct = 0;
  for (RowId r : db.labeled_target_rows()) correct += predict(unrestricted, db, r).class_code == db.label(r);
  EXPECT_EQ(correct, 40u);
}

TEST(Tree, PlantedAverageGradeIsTested) {
  SchoolSpec spec;
  spec.genres = 1;
  spec.credit_levels = 1;
  auto school = generate_school(5, spec);
  LoadOptions o;
  o.strip_target_features = true;
  auto db = school_database(school, o);
  auto m = grow_tree(db, LearnParams{});
  bool found = false;
  for (const auto& n : m.nodes) found = found || (n.test && n.test->descriptor == school.planted);
  EXPECT_TRUE(found);
}

TEST(Tree, ResubstitutionReachesLeafMajority) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto micro = lazybum::testing::random_micro_db(seed);
    auto db = Database::build(micro.catalog, micro.tables);
    LearnParams p;
    p.min_inst = 1;
    p.min_ig = 0;
    auto m = grow_tree(db, p);
    for (RowId r : db.labeled_target_rows()) {
      auto pred = predict(m, db, r);
      ASSERT_EQ(pred.distribution.size(), m.class_names.size());
      double sum = 0;
      for (double x : pred.distribution) sum += x;
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_EQ(pred.distribution[pred.class_code], *std::max_element(pred.distribution.begin(),
                                                                      pred.distribution.end()));
    }
  }
}

TEST(Tree, EmptyBagFollowsUndefinedRoute) {
  auto db = lazybum::testing::tiny_school();
  const auto& c = db.catalog();
  JoinPath student;
  for (const auto& p : enumerate_paths(c, 3)) {
    if (p.length() == 3) student = p;
  }
  TreeModel m;
  m.catalog_fingerprint = c.fingerprint();
  m.class_names = db.class_names();
  SplitTest t;
  t.descriptor = {student, 1, Aggregator::avg, {}};
  t.threshold = 75;
  t.undefined_route = Route::pass;
  m.descriptors = {t.descriptor};
  TreeNode root;
  root.test = t;
  root.left = 1;
  root.right = 2;
  root.class_counts = {2, 2};
  TreeNode yes, no;
  yes.class_counts = {1, 0};
  yes.predicted = 0;
  no.class_counts = {0, 1};
  no.predicted = 1;
  m.nodes = {root, yes, no};
  const auto p3 = lazybum::testing::target_row(db, "P3");
  const auto p1 = lazybum::testing::target_row(db, "P1");
  EXPECT_EQ(predict(m, db, p3).class_code, 0u);
  EXPECT_EQ(predict(m, db, p1).class_code, 1u);  // average 80 > 75
  m.nodes[0].test->undefined_route = Route::fail;
  EXPECT_EQ(predict(m, db, p3).class_code, 1u);
}

TEST(Tree, LazyPredictionMatchesEagerTable) {
  for (std::uint64_t seed = 20; seed < 35; ++seed) {
    auto micro = lazybum::testing::random_micro_db(seed);
    auto db = Database::build(micro.catalog, micro.tables);
    LearnParams p;
    p.strategy = seed % 2 ? Strategy::unrestricted : Strategy::restricted;
    auto m = grow_tree(db, p);
    EagerOptions eo;
    eo.max_path_len = std::nullopt;
    auto table = propositionalize(db, eo);
    for (std::size_t i = 0; i < table.size(); ++i) {
      ASSERT_EQ(predict(m, db, table.instance_ids[i]).class_code, predict_table(m, table.columns, i).class_code)
          << "seed " << seed << " row " << i;
    }
  }
}

TEST(Tree, PredictRejectsForeignSchema) {
  auto db = lazybum::testing::tiny_school();
  auto m = grow_tree(db, LearnParams{});
  auto other = lazybum::testing::two_chain_database(10);
  EXPECT_THROW(predict(m, other, 0), ModelError);
}

TEST(Tree, DeterministicGrowth) {
  auto micro = lazybum::testing::random_micro_db(4);
  auto db = Database::build(micro.catalog, micro.tables);
  auto a = serialize_model(grow_tree(db, LearnParams{}), db.catalog());
  auto b = serialize_model(grow_tree(db, LearnParams{}), db.catalog());
  EXPECT_EQ(a, b);
}

TEST(Tree, ParamValidation) {
  LearnParams p;
  EXPECT_NO_THROW(p.validate());
  p.min_inst = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.min_ig = -0.1;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.features.domsize_rel = 1.5;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Tree, FlatLearnerIgnoresFrontier) {
  auto ldt = flat({0, 0, 1, 1}, {numeric_column(0, {1, 2, 3, 4})});
  auto db = lazybum::testing::tiny_school();
  // grow_tree_from only reads the table; the database supplies class names.
  auto m = grow_tree_from(db, ldt, LearnParams{});
  EXPECT_EQ(m.leaf_count(), 2u);
}
