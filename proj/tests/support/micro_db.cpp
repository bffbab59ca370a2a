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

#include "micro_db.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace lazybum::testing {
namespace {

struct Builder {
  std::mt19937_64 rng;
  std::vector<TableSchema> schemas;
  std::vector<std::size_t> row_counts;
  std::vector<std::map<std::string, std::size_t>> domain;  // categorical column -> domain size

  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng); }

  std::size_t add_table(bool associative, std::size_t max_rows) {
    const std::size_t id = schemas.size();
    TableSchema t;
    t.name = "t" + std::to_string(id);
    t.source_file = t.name + ".csv";
    t.columns.push_back({"k" + std::to_string(id), ColumnKind::primary_key, {}, {}});
    domain.emplace_back();
    if (!associative) {
      const std::size_t attrs = pick(0, 3);
      for (std::size_t a = 0; a < attrs; ++a) {
        if (chance(0.5)) {
          t.columns.push_back({"x" + std::to_string(a), ColumnKind::numeric, {}, {}});
        } else {
          const std::string name = "c" + std::to_string(a);
          t.columns.push_back({name, ColumnKind::categorical, {}, {}});
          domain.back()[name] = chance(0.2) ? pick(20, 35) : pick(1, 6);
        }
      }
    }
    schemas.push_back(std::move(t));
    row_counts.push_back(pick(0, max_rows));
    return id;
  }

  void add_fk(std::size_t from, std::size_t to) {
    auto& cols = schemas[from].columns;
    const std::string pk = "k" + std::to_string(to);
    std::string name = pk;
    for (const auto& c : cols) {
      if (c.name == name || chance(0.3)) {
        name = "f" + std::to_string(to) + "_" + std::to_string(cols.size());
        break;
      }
    }
    cols.push_back({name, ColumnKind::foreign_key, schemas[to].name, pk});
  }
};

}  // namespace

MicroDb random_micro_db(std::uint64_t seed, const MicroOptions& options) {
  Builder b{std::mt19937_64(seed), {}, {}, {}};
  const std::size_t n_tables = b.pick(2, options.max_tables);

  b.add_table(false, options.max_rows);
  b.row_counts[0] = b.pick(options.min_target_rows, std::min(options.max_rows, options.max_target_rows));
  b.schemas[0].columns.push_back({"label", ColumnKind::categorical, {}, {}});

  while (b.schemas.size() < n_tables) {
    // Favor the newest table so schemas reach a few hops deep.
    const std::size_t parent = b.chance(0.5) ? b.schemas.size() - 1 : b.pick(0, b.schemas.size() - 1);
    const bool associative_parent = b.schemas[parent].columns.size() > 1 &&
                                    std::all_of(b.schemas[parent].columns.begin(), b.schemas[parent].columns.end(),
                                                [](const ColumnSpec& c) { return c.is_key(); });
    if (associative_parent) continue;
    const auto kind = b.pick(0, 9);
    if (kind <= 1 && b.schemas.size() + 2 <= n_tables) {
      // parent <- link -> child
      const std::size_t link = b.add_table(true, options.max_rows);
      const std::size_t child = b.add_table(false, options.max_rows);
      b.add_fk(link, parent);
      b.add_fk(link, child);
    } else if (kind <= 5) {
      const std::size_t child = b.add_table(false, options.max_rows);
      b.add_fk(child, parent);
    } else {
      const std::size_t child = b.add_table(false, options.max_rows);
      b.add_fk(parent, child);
    }
    if (b.chance(0.15)) {
      // Extra edge: parallel or cycle-closing.
      const std::size_t from = b.schemas.size() - 1;
      const std::size_t to = b.pick(0, from);
      if (to != from) b.add_fk(from, to);
    }
  }

  MicroDb out{SchemaCatalog::build(b.schemas, "t0", "label"), {}};

  auto missing_token = [&] { return b.chance(0.5) ? std::string() : std::string("?"); };
  for (std::size_t t = 0; t < b.schemas.size(); ++t) {
    RawTable raw;
    for (const auto& c : b.schemas[t].columns) raw.header.push_back(c.name);
    for (std::size_t r = 0; r < b.row_counts[t]; ++r) {
      std::vector<std::string> row;
      for (const auto& c : b.schemas[t].columns) {
        switch (c.kind) {
          case ColumnKind::primary_key:
            row.push_back(b.schemas[t].name + "_" + std::to_string(r));
            break;
          case ColumnKind::foreign_key: {
            const auto ref = *out.catalog.find_table(c.ref_table);
            if (b.row_counts[ref] == 0 || b.chance(options.dangling_rate)) {
              row.push_back(c.ref_table + "_x" + std::to_string(b.pick(0, 3)));
            } else {
              row.push_back(c.ref_table + "_" + std::to_string(b.pick(0, b.row_counts[ref] - 1)));
            }
            break;
          }
          case ColumnKind::numeric:
            if (b.chance(options.missing_rate)) {
              row.push_back(missing_token());
            } else {
              const auto quarters = static_cast<long>(b.pick(0, 320)) - 160;
              char buf[32];
              std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(quarters) / 4.0);
              row.push_back(buf);
            }
            break;
          case ColumnKind::categorical:
            if (c.name == "label" && t == 0) {
              static const char* const classes[] = {"p", "n", "m"};
              row.push_back(b.chance(0.05) ? missing_token() : classes[b.pick(0, 2)]);
            } else if (b.chance(options.missing_rate)) {
              row.push_back(missing_token());
            } else {
              row.push_back("v" + std::to_string(b.pick(0, b.domain[t].at(c.name) - 1)));
            }
            break;
        }
      }
      raw.rows.push_back(std::move(row));
    }
    out.tables.emplace(b.schemas[t].name, std::move(raw));
  }
  return out;
}

}  // namespace lazybum::testing
