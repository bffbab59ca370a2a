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

#include "lazybum/split.hpp"

#include <cmath>

#include "lazybum/error.hpp"

namespace lazybum {

Outcome test_outcome(const SplitTest& test, double cell) {
  if (is_undefined(cell)) return Outcome::undefined;
  bool pass = false;
  switch (test.kind) {
    case TestKind::numeric_le:
      pass = cell <= test.threshold;
      break;
    case TestKind::categorical_eq:
      pass = test.value_code != kMissingCode && cell == static_cast<double>(test.value_code);
      break;
    case TestKind::boolean_true:
      pass = cell != 0.0;
      break;
  }
  return pass ? Outcome::pass : Outcome::fail;
}

double entropy(std::span<const std::uint32_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw ValidationError("entropy of an empty class distribution");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right) {
  std::vector<std::uint32_t> parent(left.size());
  std::uint64_t nl = 0;
  std::uint64_t nr = 0;
  for (std::size_t k = 0; k < left.size(); ++k) {
    parent[k] = left[k] + right[k];
    nl += left[k];
    nr += right[k];
  }
  const double n = static_cast<double>(nl + nr);
  return entropy(parent) - static_cast<double>(nl) / n * entropy(left) - static_cast<double>(nr) / n * entropy(right);
}

double midpoint_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return (mid >= hi || mid < lo) ? lo : mid;
}

std::string_view test_kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::numeric_le: return "numeric_le";
    case TestKind::categorical_eq: return "categorical_eq";
    case TestKind::boolean_true: return "boolean_true";
  }
  return "?";
}

std::string_view route_name(Route route) { return route == Route::pass ? "pass" : "fail"; }

}  // namespace lazybum
