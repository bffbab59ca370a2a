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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lazybum/csv.hpp"
#include "lazybum/eager_onebm.hpp"
#include "lazybum/error.hpp"
#include "lazybum/eval.hpp"
#include "lazybum/school.hpp"
#include "lazybum/tree.hpp"

namespace lazybum::cli {
namespace {

// Flags shared by learn and cv.
struct LearnFlags {
  std::string max_depth = "inf";
  std::size_t min_inst = 3;
  double min_ig = 0.001;
  std::size_t domsize_abs = 40;
  double domsize_rel = 0.2;

  void add_to(CLI::App& app) {
    app.add_option("--min-ig", min_ig, "Minimum information gain for a split")->capture_default_str();
    app.add_option("--min-inst", min_inst, "Minimum instances in a node to split it")->capture_default_str();
    app.add_option("--max-depth", max_depth, "Maximum tree depth, or inf")->capture_default_str();
    app.add_option("--domsize-abs", domsize_abs, "Absolute domain-size bound for contains features")
        ->capture_default_str();
    app.add_option("--domsize-rel", domsize_rel, "Relative domain-size bound for contains features")
        ->capture_default_str();
  }

  LearnParams resolve() const {
    LearnParams p;
    p.max_depth = parse_bound(max_depth, "--max-depth");
    p.min_inst = min_inst;
    p.min_ig = min_ig;
    p.features.domsize_abs = domsize_abs;
    p.features.domsize_rel = domsize_rel;
    p.validate();
    return p;
  }

  static std::optional<std::size_t> parse_bound(const std::string& text, const std::string& flag) {
    if (text == "inf") return std::nullopt;
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw CLI::ValidationError(flag, "expected a non-negative integer or inf, got '" + text + "'");
    }
    return value;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Database open_database(const std::string& schema, const std::string& data, bool strip) {
  LoadOptions options;
  options.strip_target_features = strip;
  return load_database(load_schema(schema), data, options);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lazy relational decision-tree learner", "lazybum"};
  app.require_subcommand(1);

  std::string schema, data, out_path, mode = "lazy-restricted";
  LearnFlags learn_flags;

  auto* learn = app.add_subcommand("learn", "Grow a tree and write the model document");
  bool strip = false;
  std::string root_manifest;
  learn->add_option("--schema", schema, "Schema file")->required();
  learn->add_option("--data", data, "Directory holding the table CSV files")->required();
  learn->add_option("--mode", mode, "lazy-restricted or lazy-unrestricted")
      ->capture_default_str()
      ->check(CLI::IsMember({"lazy-restricted", "lazy-unrestricted"}));
  learn_flags.add_to(*learn);
  learn->add_flag("--strip-target-features", strip, "Drop non-key target-table attributes other than the target");
  learn->add_option("--root-manifest", root_manifest, "Also write the root table's column manifest");
  learn->add_option("--out", out_path, "Model output file")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Apply a model to a database");
  std::string model_path, ids_path;
  predict_cmd->add_option("--model", model_path, "Model document")->required();
  predict_cmd->add_option("--schema", schema, "Schema file")->required();
  predict_cmd->add_option("--data", data, "Directory holding the table CSV files")->required();
  predict_cmd->add_option("--ids", ids_path, "File with one target id per line (default: every target row)");
  predict_cmd->add_option("--out", out_path, "Predictions CSV")->required();

  auto* prop = app.add_subcommand("propositionalize", "Materialize the eager flat feature table");
  std::string max_path_len = "3", manifest, missing_token = "?";
  std::size_t budget_mb = 0;
  prop->add_option("--schema", schema, "Schema file")->required();
  prop->add_option("--data", data, "Directory holding the table CSV files")->required();
  prop->add_option("--max-path-len", max_path_len, "Longest join path, or inf")->capture_default_str();
  prop->add_flag("--strip-target-features", strip, "Drop non-key target-table attributes other than the target");
  prop->add_option("--missing-token", missing_token, "Text written for undefined cells")->capture_default_str();
  prop->add_option("--memory-budget-mb", budget_mb, "Abort above this many MiB of features (0 = no cap)")
      ->capture_default_str();
  prop->add_option("--manifest", manifest, "Column manifest output file");
  prop->add_option("--out", out_path, "Flat table CSV")->required();

  auto* cv = app.add_subcommand("cv", "Stratified cross-validation");
  std::size_t k = 10, jobs = 1;
  std::uint64_t seed = 0;
  bool keep_target = false, no_timing = false;
  cv->add_option("--schema", schema, "Schema file")->required();
  cv->add_option("--data", data, "Directory holding the table CSV files")->required();
  cv->add_option("--mode", mode, "lazy-restricted, lazy-unrestricted or eager")
      ->capture_default_str()
      ->check(CLI::IsMember({"lazy-restricted", "lazy-unrestricted", "eager"}));
  cv->add_option("--k", k, "Number of folds")->capture_default_str();
  cv->add_option("--seed", seed, "Fold assignment seed")->capture_default_str();
  learn_flags.add_to(*cv);
  cv->add_option("--max-path-len", max_path_len, "Longest join path in eager mode, or inf")->capture_default_str();
  cv->add_flag("--keep-target-features", keep_target, "Keep non-key target-table attributes (stripped by default)");
  cv->add_option("--jobs", jobs, "Folds evaluated in parallel")->capture_default_str();
  cv->add_flag("--no-timing", no_timing, "Omit wall-time fields from the report");
  cv->add_option("--out", out_path, "Report output file")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic database");
  std::string preset = "school", spec_path;
  synth->add_option("--preset", preset, "Generator")->capture_default_str()->check(CLI::IsMember({"school"}));
  synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
  synth->add_option("--spec", spec_path, "JSON spec of sizes and the planted rule");
  synth->add_option("--out", out_path, "Output directory")->required();

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (learn->parsed()) {
      LearnParams params = learn_flags.resolve();
      params.strategy = mode == "lazy-restricted" ? Strategy::restricted : Strategy::unrestricted;
      const Database db = open_database(schema, data, strip);
      if (!root_manifest.empty()) {
        const auto root = build_root_ldt(db, params.features);
        std::ostringstream ss;
        write_manifest(ss, root.columns, db.catalog());
        write_file(root_manifest, ss.str());
      }
      JoinStats stats;
      const TreeModel model = grow_tree(db, params, &stats);
      write_file(out_path, serialize_model(model, db.catalog()));
      out << "learned " << model.nodes.size() << " nodes, " << model.leaf_count() << " leaves, depth "
          << model.depth() << ", " << stats.total_lookups() << " join lookups, " << stats.features_materialized
          << " features materialized\n";
    } else if (predict_cmd->parsed()) {
      const Database db = open_database(schema, data, false);
      const TreeModel model = deserialize_model(read_text(model_path), db.catalog());
      std::vector<RowId> rows;
      if (ids_path.empty()) {
        rows = db.all_target_rows();
      } else {
        std::istringstream ids(read_text(ids_path));
        for (std::string line; std::getline(ids, line);) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty()) continue;
          const auto row = db.find_target_row(line);
          if (!row) throw DataError("unknown target id '" + line + "'");
          rows.push_back(*row);
        }
      }
      std::ofstream preds(out_path, std::ios::binary);
      if (!preds) throw DataError("cannot write '" + out_path + "'");
      csv::write_row(preds, {"instance_id", "predicted_class", "confidence"});
      std::size_t labeled = 0, correct = 0;
      for (RowId r : rows) {
        const Prediction p = predict(model, db, r);
        csv::write_row(preds, {db.target_id(r), model.class_names.at(p.class_code),
                               fixed(p.distribution.at(p.class_code), 6)});
        const auto label = db.label(r);
        if (label == kMissingCode) continue;
        ++labeled;
        if (db.class_names().at(static_cast<std::size_t>(label)) == model.class_names.at(p.class_code)) ++correct;
      }
      if (!preds) throw DataError("failed writing '" + out_path + "'");
      out << "predicted " << rows.size() << " instances";
      if (labeled > 0) {
        out << ", accuracy on " << labeled << " labeled: "
            << fixed(static_cast<double>(correct) / static_cast<double>(labeled));
      }
      out << "\n";
    } else if (prop->parsed()) {
      const Database db = open_database(schema, data, strip);
      EagerOptions options;
      options.max_path_len = LearnFlags::parse_bound(max_path_len, "--max-path-len");
      options.memory_budget_bytes = budget_mb * 1024 * 1024;
      JoinStats stats;
      const FlatTable flat = propositionalize(db, options, &stats);
      export_flat_csv(db, flat, out_path, missing_token);
      if (!manifest.empty()) {
        std::ostringstream ss;
        write_manifest(ss, flat.columns, db.catalog());
        write_file(manifest, ss.str());
      }
      out << "wrote " << flat.size() << " rows x " << flat.columns.size() << " features, "
          << stats.total_lookups() << " join lookups\n";
    } else if (cv->parsed()) {
      CvOptions options;
      options.k = k;
      options.seed = seed;
      options.mode = *parse_cv_mode(mode);
      options.learn = learn_flags.resolve();
      options.learn.seed = seed;
      options.eager_max_path_len = LearnFlags::parse_bound(max_path_len, "--max-path-len");
      options.jobs = jobs;
      const Database db = open_database(schema, data, !keep_target);
      const CvReport report = cross_validate(db, options);
      write_file(out_path, cv_report_json(report, db.catalog(), !no_timing));
      out << cv_summary_line(report) << "\n";
    } else if (synth->parsed()) {
      SchoolSpec spec;
      if (!spec_path.empty()) spec = SchoolSpec::from_json(read_text(spec_path));
      const GeneratedSchool school = generate_school(seed, spec);
      write_raw_database(school.catalog, school.tables, out_path);
      out << "wrote school database to " << out_path << " (" << spec.professors << " professors, planted "
          << feature_name(school.planted, school.catalog) << ", " << school.flipped << " labels flipped)\n";
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lazybum::cli
