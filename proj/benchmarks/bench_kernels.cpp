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

// Inner loops of the learner, timed one at a time.

#include <benchmark/benchmark.h>

#include <random>

#include "lazybum/eager_onebm.hpp"
#include "lazybum/school.hpp"
#include "lazybum/tree.hpp"

using namespace lazybum;

namespace {

Database make_school(std::size_t professors) {
  SchoolSpec spec;
  spec.professors = professors;
  spec.students = professors * 2;
  return school_database(generate_school(2, spec));
}

JoinPath student_path(const SchemaCatalog& c) {
  for (const auto& p : enumerate_paths(c, 3)) {
    if (p.length() == 3) return p;
  }
  return root_path(c);
}

void extend_hop(benchmark::State& state) {
  const auto db = make_school(static_cast<std::size_t>(state.range(0)));
  const auto path = student_path(db.catalog());
  const auto enrolled = instantiate_path(db, path.prefix(2, db.catalog()), db.all_target_rows());
  std::size_t rows = 0;
  for (auto _ : state) {
    auto next = extend_instantiation(db, enrolled, path.hops[2]);
    rows = next.total_rows();
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * enrolled.total_rows()));
  state.counters["joined_rows"] = static_cast<double>(rows);
}

void split_search(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t width = 32;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 100);
  LocalDataTable ldt;
  for (RowId i = 0; i < n; ++i) {
    ldt.instance_ids.push_back(i);
    ldt.labels.push_back(static_cast<std::uint32_t>(rng() % 3));
  }
  for (std::size_t c = 0; c < width; ++c) {
    FeatureColumn col;
    col.descriptor.attribute = static_cast<ColumnId>(c);
    col.descriptor.aggregator = Aggregator::avg;
    col.kind = CellKind::numeric;
    for (std::size_t i = 0; i < n; ++i) col.cells.push_back(rng() % 10 == 0 ? kUndefined : u(rng));
    ldt.columns.push_back(std::move(col));
  }
  for (auto _ : state) {
    auto s = best_split(ldt, 3);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * width));
}

void deep_features(benchmark::State& state) {
  const auto db = make_school(static_cast<std::size_t>(state.range(0)));
  const auto inst = instantiate_path(db, student_path(db.catalog()), db.all_target_rows());
  for (auto _ : state) {
    auto cols = features_for_path(db, inst, {});
    benchmark::DoNotOptimize(cols.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * inst.total_rows()));
}

void propositionalize_school(benchmark::State& state) {
  const auto db = make_school(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto flat = propositionalize(db, {});
    benchmark::DoNotOptimize(flat.columns.data());
  }
}

}  // namespace

BENCHMARK(extend_hop)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(split_search)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(deep_features)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(propositionalize_school)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
