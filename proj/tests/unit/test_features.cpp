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

#include <cmath>

#include "fixtures.hpp"
#include "lazybum/features.hpp"
#include "lazybum/school.hpp"
#include "micro_db.hpp"

using namespace lazybum;

namespace {

JoinPath path_named(const SchemaCatalog& c, const std::string& name) {
  for (const auto& p : enumerate_paths(c, 4)) {
    if (render_path(p, c) == name) return p;
  }
  throw std::runtime_error("no path " + name);
}

std::vector<std::string> names(const std::vector<FeatureDescriptor>& ds, const SchemaCatalog& c) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(feature_name(d, c));
  return out;
}

bool same_cell(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

const std::string kStudent = "Professor->Course(PID)->Enrolled(CID)->Student(SID)";

}  // namespace

TEST(Features, NumericAggregatesOfThreeValues) {
  const std::vector<double> v{8, 10, 12};
  auto a = aggregate_numeric(v);
  EXPECT_DOUBLE_EQ(a[0], 10.0);
  EXPECT_DOUBLE_EQ(a[1], std::sqrt(8.0 / 3.0));
  EXPECT_DOUBLE_EQ(a[2], 8.0 / 3.0);
  EXPECT_EQ(a[3], 12.0);
  EXPECT_EQ(a[4], 8.0);
  EXPECT_EQ(a[5], 30.0);
  EXPECT_EQ(a[6], 3.0);
}

TEST(Features, NumericAggregatesEmptyAndAllMissing) {
  for (double x : aggregate_numeric({})) EXPECT_TRUE(is_undefined(x));
  const std::vector<double> missing{kUndefined, kUndefined};
  auto a = aggregate_numeric(missing);
  EXPECT_EQ(a[6], 2.0);
  for (int i = 0; i < 6; ++i) EXPECT_TRUE(is_undefined(a[i])) << i;
}

TEST(Features, NumericAggregatesSkipMissingElements) {
  const std::vector<double> v{80, 90, kUndefined, 80, 60, 90};
  auto a = aggregate_numeric(v);
  EXPECT_DOUBLE_EQ(a[0], 80.0);
  EXPECT_DOUBLE_EQ(a[2], (0 + 100 + 0 + 400 + 100) / 5.0);
  EXPECT_EQ(a[5], 400.0);
  EXPECT_EQ(a[6], 6.0);
  EXPECT_EQ(a[3], 90.0);
  EXPECT_EQ(a[4], 60.0);
}

TEST(Features, CategoricalAggregates) {
  // Domain {a=0, b=1, c=2}.
  const std::vector<std::int32_t> aab{0, 0, 1};
  auto r = aggregate_categorical(aab, 3, true);
  EXPECT_EQ(r.count, 3.0);
  EXPECT_EQ(r.distinct_count, 2.0);
  EXPECT_EQ(r.contains, (std::vector<double>{1, 1, 0}));

  auto empty = aggregate_categorical({}, 3, true);
  EXPECT_TRUE(is_undefined(empty.count));
  EXPECT_TRUE(is_undefined(empty.distinct_count));
  for (double x : empty.contains) EXPECT_TRUE(is_undefined(x));

  const std::vector<std::int32_t> ma{kMissingCode, 0};
  auto m = aggregate_categorical(ma, 3, true);
  EXPECT_EQ(m.count, 2.0);
  EXPECT_EQ(m.distinct_count, 1.0);
  EXPECT_EQ(m.contains[0], 1.0);
  EXPECT_EQ(m.contains[2], 0.0);

  const std::vector<std::int32_t> mm{kMissingCode, kMissingCode};
  auto all_missing = aggregate_categorical(mm, 3, true);
  EXPECT_EQ(all_missing.count, 2.0);
  for (double x : all_missing.contains) EXPECT_TRUE(is_undefined(x));

  EXPECT_TRUE(aggregate_categorical(aab, 3, false).contains.empty());
}

TEST(Features, ContainsEnabledBounds) {
  const FeatureParams p;
  EXPECT_FALSE(contains_enabled(25, 100, p));
  EXPECT_TRUE(contains_enabled(2, 500, p));
  EXPECT_FALSE(contains_enabled(40, 10000, p));
  EXPECT_TRUE(contains_enabled(39, 10000, p));
  EXPECT_FALSE(contains_enabled(20, 100, p));  // relative bound is strict too
  EXPECT_TRUE(contains_enabled(19, 100, p));
}

TEST(Features, AggregatorNames) {
  for (auto agg : {Aggregator::identity, Aggregator::avg, Aggregator::stddev, Aggregator::variance, Aggregator::max,
                   Aggregator::min, Aggregator::sum, Aggregator::count, Aggregator::distinct_count,
                   Aggregator::contains, Aggregator::is_empty}) {
    EXPECT_EQ(parse_aggregator(aggregator_name(agg)), agg);
  }
  EXPECT_FALSE(parse_aggregator("median").has_value());
}

TEST(Features, StudentPathColumns) {
  auto db = lazybum::testing::tiny_school();
  const auto& c = db.catalog();
  auto ds = descriptors_for_path(db, path_named(c, kStudent), {});
  EXPECT_EQ(names(ds, c), (std::vector<std::string>{
                              kStudent + ".:is_empty", kStudent + ".grade:avg", kStudent + ".grade:std",
                              kStudent + ".grade:var", kStudent + ".grade:max", kStudent + ".grade:min",
                              kStudent + ".grade:sum", kStudent + ".grade:count"}));
}

TEST(Features, DeterminatePathGivesIdentity) {
  auto db = lazybum::testing::tiny_school();
  const auto& c = db.catalog();
  auto ds = descriptors_for_path(db, path_named(c, "Professor->Movie(MID)"), {});
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(feature_name(ds[0], c), "Professor->Movie(MID).genre:identity");
  EXPECT_EQ(cell_kind(ds[0], c), CellKind::categorical);
}

TEST(Features, KeyOnlyTerminalGivesIsEmptyOnly) {
  TableSchema p{"P", {parse_column_decl("id:pk"), parse_column_decl("y:cat")}, "P.csv"};
  TableSchema k{"K", {parse_column_decl("kid:pk"), parse_column_decl("pid:fk(P.id)")}, "K.csv"};
  auto cat = SchemaCatalog::build({p, k}, "P", "y");
  std::map<std::string, RawTable> t{
      {"P", lazybum::testing::raw_table({"id", "y"}, {{"1", "a"}, {"2", "b"}})},
      {"K", lazybum::testing::raw_table({"kid", "pid"}, {{"x", "1"}})}};
  auto db = Database::build(cat, t);
  auto ds = descriptors_for_path(db, initial_paths(cat)[0], {});
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].aggregator, Aggregator::is_empty);
  auto cols = features_for_path(db, instantiate_path(db, initial_paths(cat)[0], db.all_target_rows()), {});
  ASSERT_EQ(cols.size(), 1u);
  EXPECT_EQ(cols[0].cells, (std::vector<double>{0, 1}));
}

TEST(Features, RootPathKeepsTargetAttributesOnly) {
  auto db = lazybum::testing::tiny_school();
  const auto& c = db.catalog();
  EXPECT_EQ(names(descriptors_for_path(db, root_path(c), {}), c),
            (std::vector<std::string>{"Professor.teaching_years:identity"}));
  LoadOptions strip;
  strip.strip_target_features = true;
  auto stripped = lazybum::testing::tiny_school(strip);
  EXPECT_TRUE(descriptors_for_path(stripped, root_path(c), {}).empty());
}

TEST(Features, LupinGradeFeatures) {
  auto db = lazybum::testing::tiny_school();
  const auto& c = db.catalog();
  auto inst = instantiate_path(db, path_named(c, kStudent), db.all_target_rows());
  JoinStats stats;
  auto cols = features_for_path(db, inst, {}, &stats);
  ASSERT_EQ(cols.size(), 8u);
  EXPECT_EQ(stats.features_materialized, 8u);
  auto by_name = [&](const std::string& n) -> const FeatureColumn& {
    for (const auto& col : cols) {
      if (feature_name(col.descriptor, c) == kStudent + "." + n) return col;
    }
    throw std::runtime_error(n);
  };
  const auto& avg = by_name("grade:avg");
  EXPECT_DOUBLE_EQ(avg.cells[0], 80.0);     // P1
  EXPECT_TRUE(is_undefined(avg.cells[1]));  // P2: only a missing grade
  EXPECT_TRUE(is_undefined(avg.cells[2]));  // P3: no courses
  EXPECT_EQ(by_name("grade:count").cells[0], 6.0);
  EXPECT_EQ(by_name("grade:count").cells[1], 1.0);
  EXPECT_TRUE(is_undefined(by_name("grade:count").cells[2]));
  EXPECT_EQ(by_name(":is_empty").cells, (std::vector<double>{0, 0, 1, 1}));
  EXPECT_EQ(by_name(":is_empty").kind, CellKind::boolean);
}

TEST(Features, EvaluateDescriptorAgreesWithColumns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = lazybum::testing::random_micro_db(seed);
    auto db = Database::build(m.catalog, m.tables);
    for (const auto& path : enumerate_paths(db.catalog(), 3)) {
      auto inst = instantiate_path(db, path, db.all_target_rows());
      auto cols = features_for_path(db, inst, {});
      EXPECT_EQ(cols.size(), descriptors_for_path(db, path, {}).size());
      for (const auto& col : cols) {
        for (std::size_t i = 0; i < inst.instance_count(); ++i) {
          const double direct = evaluate_descriptor(db, col.descriptor, inst.bag(i));
          ASSERT_TRUE(same_cell(direct, col.cells[i]))
              << feature_name(col.descriptor, db.catalog()) << " seed " << seed << " row " << i;
        }
      }
    }
  }
}

TEST(Features, NoFeatureNamesAssociativeAttribute) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = lazybum::testing::random_micro_db(seed);
    auto db = Database::build(m.catalog, m.tables);
    for (const auto& path : enumerate_paths(db.catalog(), 4)) {
      for (const auto& d : descriptors_for_path(db, path, {})) {
        EXPECT_FALSE(db.catalog().is_associative(d.path.terminal()));
      }
    }
  }
}
