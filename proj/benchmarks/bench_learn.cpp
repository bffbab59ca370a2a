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

// End-to-end costs on synthetic school data: lazy tree growth against
// eager propositionalization plus a flat tree.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "lazybum/eager_onebm.hpp"
#include "lazybum/school.hpp"
#include "lazybum/tree.hpp"

using namespace lazybum;

namespace {

const Database& school(std::size_t professors, SchoolRule rule) {
  static std::map<std::pair<std::size_t, int>, std::unique_ptr<Database>> cache;
  auto& slot = cache[{professors, static_cast<int>(rule)}];
  if (!slot) {
    SchoolSpec spec;
    spec.professors = professors;
    spec.students = professors * 2;
    spec.movies = 20;
    spec.rule = rule;
    spec.credit_levels = 1;
    if (rule == SchoolRule::avg_grade) spec.genres = 1;
    LoadOptions o;
    o.strip_target_features = true;
    slot = std::make_unique<Database>(school_database(generate_school(1, spec), o));
  }
  return *slot;
}

void lazy_learn(benchmark::State& state, SchoolRule rule, Strategy strategy) {
  const auto& db = school(static_cast<std::size_t>(state.range(0)), rule);
  LearnParams p;
  p.strategy = strategy;
  JoinStats stats;
  for (auto _ : state) {
    stats = {};
    auto m = grow_tree(db, p, &stats);
    benchmark::DoNotOptimize(m.nodes.data());
  }
  state.counters["lookups"] = static_cast<double>(stats.total_lookups());
  state.counters["features"] = static_cast<double>(stats.features_materialized);
}

void eager_learn(benchmark::State& state, SchoolRule rule) {
  const auto& db = school(static_cast<std::size_t>(state.range(0)), rule);
  JoinStats stats;
  for (auto _ : state) {
    stats = {};
    auto flat = propositionalize(db, {}, &stats);
    std::vector<std::uint32_t> rows;
    for (std::uint32_t i = 0; i < flat.size(); ++i) {
      if (flat.labels[i] != kMissingCode) rows.push_back(i);
    }
    auto m = grow_tree_from(db, ldt_from_flat(flat, rows), LearnParams{});
    benchmark::DoNotOptimize(m.nodes.data());
  }
  state.counters["lookups"] = static_cast<double>(stats.total_lookups());
  state.counters["features"] = static_cast<double>(stats.features_materialized);
}

}  // namespace

BENCHMARK_CAPTURE(lazy_learn, genre_restricted, SchoolRule::movie_genre, Strategy::restricted)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(lazy_learn, avg_grade_restricted, SchoolRule::avg_grade, Strategy::restricted)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(lazy_learn, avg_grade_unrestricted, SchoolRule::avg_grade, Strategy::unrestricted)
    ->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eager_learn, genre, SchoolRule::movie_genre)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eager_learn, avg_grade, SchoolRule::avg_grade)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
