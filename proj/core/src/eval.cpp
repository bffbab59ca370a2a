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

#include "lazybum/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

using Clock = std::chrono::steady_clock;

std::uint32_t majority_class(std::span<const std::uint32_t> labels, std::size_t k) {
  std::vector<std::size_t> counts(k, 0);
  for (auto l : labels) ++counts[l];
  return static_cast<std::uint32_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

FoldResult run_fold(const Database& db, const CvOptions& options, std::span<const RowId> rows,
                    std::span<const std::uint32_t> labels, const std::vector<std::uint32_t>& test_idx) {
  const std::size_t k = db.class_names().size();
  std::vector<std::uint8_t> in_test(rows.size(), 0);
  for (auto i : test_idx) in_test[i] = 1;
  std::vector<RowId> train_rows;
  std::vector<std::uint32_t> train_labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (in_test[i]) continue;
    train_rows.push_back(rows[i]);
    train_labels.push_back(labels[i]);
  }

  FoldResult fold;
  fold.train_size = train_rows.size();
  fold.test_size = test_idx.size();
  const auto start = Clock::now();
  TreeModel model;
  std::vector<std::uint32_t> predicted;
  predicted.reserve(test_idx.size());
  if (options.mode == CvMode::eager) {
    EagerOptions eager;
    eager.max_path_len = options.eager_max_path_len;
    eager.features = options.learn.features;
    eager.memory_budget_bytes = options.eager_memory_budget_bytes;
    const FlatTable flat = propositionalize(db, eager, &fold.stats);
    // Flat rows are target rows in order, so a target row is its own index.
    std::vector<std::uint32_t> flat_rows(train_rows.begin(), train_rows.end());
    model = grow_tree_from(db, ldt_from_flat(flat, flat_rows), options.learn, &fold.stats);
    for (auto i : test_idx) predicted.push_back(predict_table(model, flat.columns, rows[i]).class_code);
  } else {
    LearnParams params = options.learn;
    params.strategy = options.mode == CvMode::lazy_restricted ? Strategy::restricted : Strategy::unrestricted;
    model = grow_tree(db, train_rows, params, &fold.stats);
    for (auto i : test_idx) predicted.push_back(predict(model, db, rows[i]).class_code);
  }
  fold.seconds = std::chrono::duration<double>(Clock::now() - start).count();

  const auto majority = majority_class(train_labels, k);
  std::size_t majority_hits = 0;
  for (std::size_t j = 0; j < test_idx.size(); ++j) {
    const auto truth = labels[test_idx[j]];
    if (predicted[j] == truth) ++fold.correct;
    if (majority == truth) ++majority_hits;
  }
  const double n = static_cast<double>(test_idx.size());
  fold.accuracy = static_cast<double>(fold.correct) / n;
  fold.majority_accuracy = static_cast<double>(majority_hits) / n;
  fold.leaves = model.leaf_count();
  fold.depth = model.depth();
  return fold;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> stratified_folds(std::span<const std::uint32_t> labels, std::size_t k,
                                                         std::uint64_t seed) {
  if (k < 2) throw ValidationError("number of folds must be at least 2");
  if (k > labels.size()) {
    throw ValidationError("number of folds (" + std::to_string(k) + ") exceeds instance count (" +
                          std::to_string(labels.size()) + ")");
  }
  std::uint32_t num_classes = 0;
  for (auto l : labels) num_classes = std::max(num_classes, l + 1);
  std::vector<std::vector<std::uint32_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(static_cast<std::uint32_t>(i));

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> folds(k);
  std::size_t next = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::string_view cv_mode_name(CvMode mode) {
  switch (mode) {
    case CvMode::lazy_restricted:
      return "lazy-restricted";
    case CvMode::lazy_unrestricted:
      return "lazy-unrestricted";
    case CvMode::eager:
      return "eager";
  }
  return "?";
}

std::optional<CvMode> parse_cv_mode(std::string_view name) {
  for (auto m : {CvMode::lazy_restricted, CvMode::lazy_unrestricted, CvMode::eager}) {
    if (cv_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

CvReport cross_validate(const Database& db, const CvOptions& options) {
  options.learn.validate();
  const auto rows = db.labeled_target_rows();
  std::vector<std::uint32_t> labels;
  labels.reserve(rows.size());
  for (RowId r : rows) labels.push_back(static_cast<std::uint32_t>(db.label(r)));
  const auto folds = stratified_folds(labels, options.k, options.seed);

  CvReport report;
  report.options = options;
  report.folds.resize(folds.size());
  const auto start = Clock::now();
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, folds.size());
  if (jobs == 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) report.folds[f] = run_fold(db, options, rows, labels, folds[f]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t j = 0; j < jobs; ++j) {
      workers.emplace_back([&] {
        for (std::size_t f = next++; f < folds.size(); f = next++) {
          try {
            report.folds[f] = run_fold(db, options, rows, labels, folds[f]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }
  report.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  double acc = 0.0, majority = 0.0;
  for (const auto& f : report.folds) {
    acc += f.accuracy;
    majority += f.majority_accuracy;
    report.stats.merge(f.stats);
  }
  report.mean_accuracy = acc / static_cast<double>(report.folds.size());
  report.majority_baseline = majority / static_cast<double>(report.folds.size());
  return report;
}

std::string cv_report_json(const CvReport& report, const SchemaCatalog& catalog, bool include_timing) {
  using ordered_json = nlohmann::ordered_json;
  const auto& o = report.options;
  ordered_json doc;
  doc["mode"] = std::string(cv_mode_name(o.mode));
  doc["k"] = o.k;
  doc["seed"] = o.seed;
  ordered_json params;
  if (o.learn.max_depth) {
    params["max_depth"] = *o.learn.max_depth;
  } else {
    params["max_depth"] = "inf";
  }
  params["min_inst"] = o.learn.min_inst;
  params["min_ig"] = o.learn.min_ig;
  params["domsize_abs"] = o.learn.features.domsize_abs;
  params["domsize_rel"] = o.learn.features.domsize_rel;
  if (o.mode == CvMode::eager) {
    if (o.eager_max_path_len) {
      params["max_path_len"] = *o.eager_max_path_len;
    } else {
      params["max_path_len"] = "inf";
    }
  }
  doc["params"] = std::move(params);
  doc["mean_accuracy"] = report.mean_accuracy;
  doc["majority_baseline"] = report.majority_baseline;
  doc["total_lookups"] = report.stats.total_lookups();
  doc["lookups_by_length"] = report.stats.lookups_by_length;
  doc["features_materialized"] = report.stats.features_materialized;
  ordered_json paths = ordered_json::array();
  for (const auto& p : report.stats.materialized_paths) paths.push_back(render_path(p, catalog));
  doc["materialized_paths"] = std::move(paths);
  if (include_timing) doc["total_seconds"] = report.total_seconds;

  ordered_json folds = ordered_json::array();
  for (const auto& f : report.folds) {
    ordered_json j;
    j["train_size"] = f.train_size;
    j["test_size"] = f.test_size;
    j["accuracy"] = f.accuracy;
    j["majority_accuracy"] = f.majority_accuracy;
    j["leaves"] = f.leaves;
    j["depth"] = f.depth;
    j["lookups"] = f.stats.total_lookups();
    j["features_materialized"] = f.stats.features_materialized;
    if (include_timing) j["seconds"] = f.seconds;
    folds.push_back(std::move(j));
  }
  doc["folds"] = std::move(folds);
  return doc.dump(2) + "\n";
}

std::string cv_summary_line(const CvReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s k=%zu accuracy=%.4f majority=%.4f lookups=%llu features=%llu time=%.2fs",
                std::string(cv_mode_name(report.options.mode)).c_str(), report.options.k, report.mean_accuracy,
                report.majority_baseline, static_cast<unsigned long long>(report.stats.total_lookups()),
                static_cast<unsigned long long>(report.stats.features_materialized), report.total_seconds);
  return buf;
}

}  // namespace lazybum
