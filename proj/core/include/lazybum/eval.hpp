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
#include <span>
#include <string>
#include <vector>

#include "lazybum/eager_onebm.hpp"
#include "lazybum/storage.hpp"
#include "lazybum/tree.hpp"

namespace lazybum {

// k disjoint folds of indices into `labels`, each sorted. Every class is
// shuffled with a seeded engine and dealt round-robin, continuing from the
// fold where the previous class stopped, so fold sizes and per-class counts
// differ by at most one.
std::vector<std::vector<std::uint32_t>> stratified_folds(std::span<const std::uint32_t> labels, std::size_t k,
                                                         std::uint64_t seed);

enum class CvMode : std::uint8_t { lazy_restricted, lazy_unrestricted, eager };

std::string_view cv_mode_name(CvMode mode);
std::optional<CvMode> parse_cv_mode(std::string_view name);

struct CvOptions {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  CvMode mode = CvMode::lazy_restricted;
  LearnParams learn;  // strategy is overridden by lazy modes
  std::optional<std::size_t> eager_max_path_len = 3;
  std::size_t eager_memory_budget_bytes = 0;
  std::size_t jobs = 1;
};

struct FoldResult {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double majority_accuracy = 0.0;
  double seconds = 0.0;
  std::size_t leaves = 0;
  std::size_t depth = 0;
  JoinStats stats;
};

struct CvReport {
  CvOptions options;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double majority_baseline = 0.0;
  double total_seconds = 0.0;
  JoinStats stats;  // merged over folds
};

// Trains on k-1 folds and scores the held-out fold, for every fold. Lazy
// modes grow a tree with the matching extension strategy and predict with
// on-demand joins; eager mode propositionalizes every target row, then
// grows a tree over the flat training rows. Wall time covers training and,
// for eager, propositionalization.
CvReport cross_validate(const Database& db, const CvOptions& options);

// Structured report. Timing fields are omitted when include_timing is false,
// which makes reports of identical runs byte-identical.
std::string cv_report_json(const CvReport& report, const SchemaCatalog& catalog, bool include_timing = true);
std::string cv_summary_line(const CvReport& report);

}  // namespace lazybum
