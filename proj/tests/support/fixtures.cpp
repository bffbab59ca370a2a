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

#include "fixtures.hpp"

#include <stdexcept>

#include "lazybum/school.hpp"

namespace lazybum::testing {

RawTable raw_table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows) {
  RawTable t;
  t.header = std::move(header);
  t.rows = std::move(rows);
  return t;
}

std::map<std::string, RawTable> tiny_school_tables() {
  std::map<std::string, RawTable> t;
  t["Professor"] = raw_table({"PID", "teaching_years", "popular", "MID"}, {
                                                                              {"P1", "5", "yes", "M1"},
                                                                              {"P2", "3", "no", "M2"},
                                                                              {"P3", "10", "yes", "M1"},
                                                                              {"P4", "1", "no", "M2"},
                                                                          });
  t["Movie"] = raw_table({"MID", "genre"}, {{"M1", "comedy"}, {"M2", "drama"}});
  t["Course"] = raw_table({"CID", "PID", "credits"}, {
                                                          {"C1", "P1", "3"},
                                                          {"C2", "P1", "4"},
                                                          {"C3", "P2", "3"},
                                                          {"C4", "P4", "5"},
                                                      });
  t["Enrolled"] = raw_table({"EID", "CID", "SID"}, {
                                                       {"E1", "C1", "S1"},
                                                       {"E2", "C1", "S2"},
                                                       {"E3", "C1", "S3"},
                                                       {"E4", "C2", "S1"},
                                                       {"E5", "C2", "S4"},
                                                       {"E6", "C2", "S2"},
                                                       {"E7", "C3", "S3"},
                                                   });
  t["Student"] = raw_table({"SID", "grade"}, {{"S1", "80"}, {"S2", "90"}, {"S3", "?"}, {"S4", "60"}});
  return t;
}

Database tiny_school(const LoadOptions& options) {
  return Database::build(school_catalog(), tiny_school_tables(), options);
}

SchemaCatalog single_table_catalog() {
  TableSchema t;
  t.name = "T";
  t.source_file = "T.csv";
  t.columns = {parse_column_decl("id:pk"), parse_column_decl("x:num"), parse_column_decl("color:cat"),
               parse_column_decl("label:cat")};
  return SchemaCatalog::build({t}, "T", "label");
}

Database two_chain_database(std::size_t n) {
  auto table = [](std::string name, std::vector<std::string> decls) {
    TableSchema t;
    t.name = std::move(name);
    t.source_file = t.name + ".csv";
    for (const auto& d : decls) t.columns.push_back(parse_column_decl(d));
    return t;
  };
  auto catalog = SchemaCatalog::build({table("T", {"id:pk", "y:cat"}),
                                       table("A", {"aid:pk", "tid:fk(T.id)", "x:num"}),
                                       table("A2", {"a2id:pk", "aid:fk(A.aid)", "x:num"}),
                                       table("A3", {"a3id:pk", "a2id:fk(A2.a2id)", "x:num"}),
                                       table("B", {"bid:pk", "tid:fk(T.id)", "z:num"}),
                                       table("B2", {"b2id:pk", "bid:fk(B.bid)", "z:num"}),
                                       table("B3", {"b3id:pk", "b2id:fk(B2.b2id)", "z:num"})},
                                      "T", "y");
  std::map<std::string, RawTable> t;
  t["T"] = raw_table({"id", "y"}, {});
  t["A"] = raw_table({"aid", "tid", "x"}, {});
  t["A2"] = raw_table({"a2id", "aid", "x"}, {});
  t["A3"] = raw_table({"a3id", "a2id", "x"}, {});
  t["B"] = raw_table({"bid", "tid", "z"}, {});
  t["B2"] = raw_table({"b2id", "bid", "z"}, {});
  t["B3"] = raw_table({"b3id", "b2id", "z"}, {});
  for (std::size_t i = 0; i < n; ++i) {
    const std::string k = std::to_string(i);
    const bool first_half = i < n / 2;
    const bool b3 = i % 2 == 1;
    t["T"].rows.push_back({"t" + k, first_half || b3 ? "p" : "n"});
    t["A"].rows.push_back({"a" + k, "t" + k, "1"});
    t["A2"].rows.push_back({"aa" + k, "a" + k, first_half ? "1" : "0"});
    t["A3"].rows.push_back({"aaa" + k, "aa" + k, "1"});
    t["B"].rows.push_back({"b" + k, "t" + k, "1"});
    t["B2"].rows.push_back({"bb" + k, "b" + k, "1"});
    t["B3"].rows.push_back({"bbb" + k, "bb" + k, b3 ? "1" : "0"});
  }
  return Database::build(std::move(catalog), t);
}

RowId target_row(const Database& db, const std::string& id) {
  auto row = db.find_target_row(id);
  if (!row) throw std::runtime_error("no target row " + id);
  return *row;
}

}  // namespace lazybum::testing
