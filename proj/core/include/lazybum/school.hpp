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
#include <map>
#include <string>
#include <string_view>

#include "lazybum/features.hpp"
#include "lazybum/schema_catalog.hpp"
#include "lazybum/storage.hpp"

namespace lazybum {

enum class SchoolRule : std::uint8_t { avg_grade, movie_genre };

// Sizes and planted concept of a synthetic school database with tables
// Professor(PID, teaching_years, popular, MID), Movie(MID, genre),
// Course(CID, PID, credits), Enrolled(EID, CID, SID), Student(SID, grade).
struct SchoolSpec {
  std::size_t professors = 100;
  std::size_t min_courses = 3;  // per professor, uniform in [min, max]
  std::size_t max_courses = 3;
  std::size_t enrollments_per_course = 10;  // distinct students per course
  std::size_t students = 200;
  std::size_t movies = 20;
  std::size_t genres = 4;
  std::size_t credit_levels = 6;  // Course.credits uniform in [1, credit_levels]
  SchoolRule rule = SchoolRule::avg_grade;
  double threshold = 70.0;          // avg_grade: popular iff avg grade > threshold
  double noise = 0.0;               // probability of flipping each label
  double missing_grade_rate = 0.0;  // probability a student's grade is missing

  // Throws ValidationError for an infeasible combination.
  void validate() const;
  static SchoolSpec from_json(std::string_view text);
  std::string to_json() const;
};

struct GeneratedSchool {
  SchemaCatalog catalog;
  std::map<std::string, RawTable> tables;
  FeatureDescriptor planted;  // feature the clean label is a threshold/equality on
  std::size_t flipped = 0;    // labels changed by noise
};

SchemaCatalog school_catalog();

// Grades are integers uniform in [40, 100]. avg_grade: professors whose
// average is undefined (no enrollments or only missing grades) are
// labeled "no". movie_genre: "yes" iff the professor's movie genre code is
// below genres / 2. Labels are then flipped with probability `noise`.
GeneratedSchool generate_school(std::uint64_t seed, const SchoolSpec& spec);

Database school_database(const GeneratedSchool& school, const LoadOptions& options = {});

}  // namespace lazybum
