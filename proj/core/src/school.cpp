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

#include "lazybum/school.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "lazybum/error.hpp"

namespace lazybum {
namespace {

std::string key(char prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

std::string genre_name(std::size_t g) { return "g" + std::to_string(g); }

}  // namespace

void SchoolSpec::validate() const {
  if (professors < 1) throw ValidationError("professors must be at least 1");
  if (movies < 1) throw ValidationError("movies must be at least 1");
  if (genres < 1) throw ValidationError("genres must be at least 1");
  if (credit_levels < 1) throw ValidationError("credit_levels must be at least 1");
  if (rule == SchoolRule::movie_genre && genres < 2) throw ValidationError("movie_genre rule needs at least 2 genres");
  if (min_courses > max_courses) throw ValidationError("min_courses exceeds max_courses");
  if (max_courses == 0 && enrollments_per_course > 0) {
    throw ValidationError("enrollments requested but no professor can have a course");
  }
  if (enrollments_per_course > students) {
    throw ValidationError("enrollments_per_course exceeds the number of students");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw ValidationError("noise must lie in [0, 1]");
  if (!(missing_grade_rate >= 0.0 && missing_grade_rate <= 1.0)) {
    throw ValidationError("missing_grade_rate must lie in [0, 1]");
  }
}

SchoolSpec SchoolSpec::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("spec must be a JSON object");
  SchoolSpec spec;
  try {
    for (const auto& [name, value] : doc.items()) {
      if (name == "professors") {
        spec.professors = value.get<std::size_t>();
      } else if (name == "courses_per_professor") {
        if (value.is_array()) {
          spec.min_courses = value.at(0).get<std::size_t>();
          spec.max_courses = value.at(1).get<std::size_t>();
        } else {
          spec.min_courses = spec.max_courses = value.get<std::size_t>();
        }
      } else if (name == "enrollments_per_course") {
        spec.enrollments_per_course = value.get<std::size_t>();
      } else if (name == "students") {
        spec.students = value.get<std::size_t>();
      } else if (name == "movies") {
        spec.movies = value.get<std::size_t>();
      } else if (name == "genres") {
        spec.genres = value.get<std::size_t>();
      } else if (name == "credit_levels") {
        spec.credit_levels = value.get<std::size_t>();
      } else if (name == "rule") {
        const auto rule = value.get<std::string>();
        if (rule == "avg_grade") {
          spec.rule = SchoolRule::avg_grade;
        } else if (rule == "movie_genre") {
          spec.rule = SchoolRule::movie_genre;
        } else {
          throw ValidationError("unknown rule '" + rule + "'");
        }
      } else if (name == "threshold") {
        spec.threshold = value.get<double>();
      } else if (name == "noise") {
        spec.noise = value.get<double>();
      } else if (name == "missing_grade_rate") {
        spec.missing_grade_rate = value.get<double>();
      } else {
        throw ValidationError("unknown spec field '" + name + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad spec value: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string SchoolSpec::to_json() const {
  nlohmann::ordered_json doc;
  doc["professors"] = professors;
  doc["courses_per_professor"] = {min_courses, max_courses};
  doc["enrollments_per_course"] = enrollments_per_course;
  doc["students"] = students;
  doc["movies"] = movies;
  doc["genres"] = genres;
  doc["credit_levels"] = credit_levels;
  doc["rule"] = rule == SchoolRule::avg_grade ? "avg_grade" : "movie_genre";
  doc["threshold"] = threshold;
  doc["noise"] = noise;
  doc["missing_grade_rate"] = missing_grade_rate;
  return doc.dump(2) + "\n";
}

SchemaCatalog school_catalog() {
  auto col = [](std::string name, ColumnKind kind, std::string ref_table = {}, std::string ref_column = {}) {
    return ColumnSpec{std::move(name), kind, std::move(ref_table), std::move(ref_column)};
  };
  std::vector<TableSchema> tables;
  tables.push_back({"Professor",
                    {col("PID", ColumnKind::primary_key), col("teaching_years", ColumnKind::numeric),
                     col("popular", ColumnKind::categorical), col("MID", ColumnKind::foreign_key, "Movie", "MID")},
                    "Professor.csv"});
  tables.push_back({"Movie", {col("MID", ColumnKind::primary_key), col("genre", ColumnKind::categorical)}, "Movie.csv"});
  tables.push_back({"Course",
                    {col("CID", ColumnKind::primary_key), col("PID", ColumnKind::foreign_key, "Professor", "PID"),
                     col("credits", ColumnKind::numeric)},
                    "Course.csv"});
  tables.push_back({"Enrolled",
                    {col("EID", ColumnKind::primary_key), col("CID", ColumnKind::foreign_key, "Course", "CID"),
                     col("SID", ColumnKind::foreign_key, "Student", "SID")},
                    "Enrolled.csv"});
  tables.push_back({"Student", {col("SID", ColumnKind::primary_key), col("grade", ColumnKind::numeric)}, "Student.csv"});
  return SchemaCatalog::build(std::move(tables), "Professor", "popular");
}

GeneratedSchool generate_school(std::uint64_t seed, const SchoolSpec& spec) {
  spec.validate();
  GeneratedSchool out{school_catalog(), {}, {}, 0};
  const auto& cat = out.catalog;
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::bernoulli_distribution grade_missing(spec.missing_grade_rate);
  std::bernoulli_distribution flip(spec.noise);

  RawTable movie{{"MID", "genre"}, {}};
  std::vector<std::size_t> movie_genre(spec.movies);
  for (std::size_t m = 0; m < spec.movies; ++m) {
    movie_genre[m] = uniform(0, spec.genres - 1);
    movie.rows.push_back({key('M', m), genre_name(movie_genre[m])});
  }

  RawTable student{{"SID", "grade"}, {}};
  std::vector<std::optional<int>> grade(spec.students);
  for (std::size_t s = 0; s < spec.students; ++s) {
    const int g = static_cast<int>(uniform(40, 100));
    if (!grade_missing(rng)) grade[s] = g;
    student.rows.push_back({key('S', s), grade[s] ? std::to_string(*grade[s]) : std::string()});
  }

  RawTable course{{"CID", "PID", "credits"}, {}};
  RawTable enrolled{{"EID", "CID", "SID"}, {}};
  RawTable professor{{"PID", "teaching_years", "popular", "MID"}, {}};
  std::vector<std::size_t> pool(spec.students);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::size_t course_count = 0;
  for (std::size_t p = 0; p < spec.professors; ++p) {
    const std::size_t mid = uniform(0, spec.movies - 1);
    const std::size_t years = uniform(1, 30);
    long grade_sum = 0;
    std::size_t graded = 0;
    const std::size_t courses = uniform(spec.min_courses, spec.max_courses);
    for (std::size_t c = 0; c < courses; ++c, ++course_count) {
      const std::string cid = key('C', course_count);
      course.rows.push_back({cid, key('P', p), std::to_string(uniform(1, spec.credit_levels))});
      // Partial Fisher-Yates: the first n entries become a random sample.
      for (std::size_t e = 0; e < spec.enrollments_per_course; ++e) {
        std::swap(pool[e], pool[uniform(e, pool.size() - 1)]);
        const std::size_t s = pool[e];
        enrolled.rows.push_back({key('E', enrolled.rows.size()), cid, key('S', s)});
        if (grade[s]) {
          grade_sum += *grade[s];
          ++graded;
        }
      }
    }
    bool popular = false;
    if (spec.rule == SchoolRule::avg_grade) {
      popular = graded > 0 && static_cast<double>(grade_sum) > spec.threshold * static_cast<double>(graded);
    } else {
      popular = movie_genre[mid] < spec.genres / 2;
    }
    if (flip(rng)) {
      popular = !popular;
      ++out.flipped;
    }
    professor.rows.push_back({key('P', p), std::to_string(years), popular ? "yes" : "no", key('M', mid)});
  }

  out.tables.emplace("Professor", std::move(professor));
  out.tables.emplace("Movie", std::move(movie));
  out.tables.emplace("Course", std::move(course));
  out.tables.emplace("Enrolled", std::move(enrolled));
  out.tables.emplace("Student", std::move(student));

  auto hop_to = [&](JoinPath path, std::string_view table, std::string_view from_col, std::string_view to_col) {
    const TableId from = path.terminal();
    const TableId to = cat.table_id(table);
    return path.extended(Hop{from, *cat.table(from).find_column(from_col), to, *cat.table(to).find_column(to_col)}, cat);
  };
  JoinPath path = root_path(cat);
  if (spec.rule == SchoolRule::avg_grade) {
    path = hop_to(path, "Course", "PID", "PID");
    path = hop_to(path, "Enrolled", "CID", "CID");
    path = hop_to(path, "Student", "SID", "SID");
    out.planted = FeatureDescriptor{path, cat.table(path.terminal()).find_column("grade"), Aggregator::avg, {}};
  } else {
    path = hop_to(path, "Movie", "MID", "MID");
    out.planted = FeatureDescriptor{path, cat.table(path.terminal()).find_column("genre"), Aggregator::identity, {}};
  }
  return out;
}

Database school_database(const GeneratedSchool& school, const LoadOptions& options) {
  return Database::build(school.catalog, school.tables, options);
}

}  // namespace lazybum
