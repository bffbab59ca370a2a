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
#include <span>
#include <string>
#include <vector>

#include "lazybum/features.hpp"

namespace lazybum {

enum class TestKind : std::uint8_t { numeric_le, categorical_eq, boolean_true };
enum class Route : std::uint8_t { pass, fail };
enum class Outcome : std::uint8_t { pass, fail, undefined };

// Binary test on one feature. Instances whose cell is undefined follow
// undefined_route; the pass side is the left child.
struct SplitTest {
  FeatureDescriptor descriptor;
  TestKind kind = TestKind::numeric_le;
  double threshold = 0.0;                 // numeric_le
  std::int32_t value_code = kMissingCode; // categorical_eq, code in the training database
  std::string value;                      // categorical_eq
  Route undefined_route = Route::fail;
};

Outcome test_outcome(const SplitTest& test, double cell);
inline bool goes_left(const SplitTest& test, double cell) {
  const Outcome o = test_outcome(test, cell);
  return o == Outcome::pass || (o == Outcome::undefined && test.undefined_route == Route::pass);
}

// Shannon entropy in bits; throws ValidationError when every count is 0.
double entropy(std::span<const std::uint32_t> counts);

// Parent entropy minus the size-weighted child entropies. Both sides must
// be nonempty; parent = left + right elementwise.
double information_gain(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right);

// Candidate threshold between two consecutive distinct values lo < hi,
// guaranteed to satisfy lo <= t < hi.
double midpoint_threshold(double lo, double hi);

std::string_view test_kind_name(TestKind kind);
std::string_view route_name(Route route);

}  // namespace lazybum
