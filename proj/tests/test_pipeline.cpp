// smtkit/tests/test_pipeline.cpp
//
// Copyright 2026  smtkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "smtkit/pipeline.hpp"
#include "synthetic.hpp"

using namespace smtkit;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  std::string dir = "/tmp/smtkit_test_pipeline/" + name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> kv(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const std::string& line : split_lines(read_file(path))) {
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 2) out[fields[0]] = fields[1];
  }
  return out;
}

std::vector<std::string> sorted_lines(const std::string& path) {
  std::vector<std::string> lines = split_lines(read_file(path));
  std::sort(lines.begin(), lines.end());
  return lines;
}

}  // namespace

TEST_CASE("the config template parses back to the defaults", "[pipeline]") {
  std::string tpl = config_template();
  CHECK(tpl.rfind("# experiment configuration", 0) == 0);
  ExperimentConfig parsed = parse_config_text(tpl, "template");
  CHECK(canonical_config(parsed) == canonical_config(ExperimentConfig{}));
  CHECK(tpl.find("config_version = 1") != std::string::npos);
}

TEST_CASE("config parsing tolerates comments, blanks and spacing", "[pipeline]") {
  std::string text =
      "# a comment\n"
      "\n"
      "label = my system\n"
      "  em_iterations =  7 \n"
      "use_synsets = true\n"
      "synset_pos_filter = noun, verb\n"
      "distortion_limit = -1\n";
  ExperimentConfig cfg = parse_config_text(text, "test.cfg");
  CHECK(cfg.label == "my system");
  CHECK(cfg.em.iterations == 7);
  CHECK(cfg.use_synsets);
  CHECK(cfg.synset_pos == std::set<Pos>{Pos::noun, Pos::verb});
  CHECK(cfg.decoder.distortion_limit == -1);
  CHECK(canonical_config(cfg).find("label = my system\n") != std::string::npos);
}

TEST_CASE("config errors carry the line and file", "[pipeline]") {
  auto parse = [](const std::string& text) { return parse_config_text(text, "test.cfg"); };
  CHECK_THROWS_WITH(parse("mystery = 1\n"), "unknown key 'mystery', line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("label = a\nlabel = b\n"), "duplicate key 'label', line 2 of test.cfg");
  CHECK_THROWS_WITH(parse("use_synsets = maybe\n"),
                    "expected true or false, got 'maybe', line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("no equals sign\n"), "expected key = value, line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("config_version = 2\n"),
                    "unsupported config_version '2', line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("replication = 0\n"), "replication must be >= 1, line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("source_script = klingon\n"),
                    "unknown script rule: klingon, line 1 of test.cfg");
  CHECK_THROWS_WITH(parse("synset_pos_filter = blah\n"),
                    "unknown part of speech 'blah', line 1 of test.cfg");
  CHECK_THROWS_AS(parse("em_iterations = soon\n"), ConfigError);
  CHECK_THROWS_AS(parse("lm_alpha = 0\n"), ConfigError);
  CHECK_THROWS_WITH(parse_config("/nonexistent/file.cfg"),
                    "config file not found: /nonexistent/file.cfg");
}

TEST_CASE("stages refuse to run before their prerequisites", "[pipeline]") {
  std::string out = fresh_dir("prereq");
  ExperimentConfig cfg;
  cfg.out_dir = out;

  CHECK_THROWS_WITH(run_stage(Stage::evaluate, cfg), "missing translations; run translate");
  CHECK_THROWS_WITH(run_stage(Stage::train, cfg), "missing augmented corpus; run augment");
  CHECK_THROWS_WITH(run_stage(Stage::translate, cfg), "missing trained models; run train");
  CHECK_THROWS_WITH(run_stage(Stage::tune, cfg), "missing trained models; run train");
  CHECK_THROWS_WITH(run_stage(Stage::augment, cfg), "missing cleaned corpus; run clean");
  CHECK_THROWS_WITH(run_stage(Stage::clean, cfg), "train_source required for stage clean");
  cfg.train_source = "/nope.src";
  CHECK_THROWS_WITH(run_stage(Stage::clean, cfg), "file not found: /nope.src (train_source)");

  // cleaned corpus present but the lexicon artifact is not
  write_file(out + "/cleaned.src", "क\n");
  write_file(out + "/cleaned.tgt", "ख\n");
  cfg.use_synsets = true;
  CHECK_THROWS_WITH(run_stage(Stage::augment, cfg), "missing lexicon; run extract-lexicon");
}

TEST_CASE("the staged pipeline produces, skips and refreshes artifacts", "[pipeline]") {
  synthfix::Fixture f = synthfix::write_fixture(fresh_dir("fixture"));
  std::string out = fresh_dir("stages");
  ExperimentConfig cfg = synthfix::fixture_config(f, out);
  cfg.use_synsets = true;
  cfg.use_function_words = true;
  cfg.use_kridanta = true;
  cfg.use_verb_phrases = true;
  cfg.tuning = true;

  const std::vector<Stage> stages = {Stage::clean,     Stage::extract_lexicon, Stage::augment,
                                     Stage::train,     Stage::tune,            Stage::translate,
                                     Stage::evaluate};
  for (Stage s : stages) {
    StageResult r = run_stage(s, cfg);
    INFO(to_string(s));
    CHECK_FALSE(r.skipped);
    for (const std::string& path : r.outputs) CHECK(file_exists(path));
  }

  // nothing removed: the fixture is clean by construction
  CHECK(read_file(out + "/cleaning_report.tsv").empty());
  CHECK(split_lines(read_file(out + "/cleaned.src")).size() == 500);

  // 500 corpus pairs + 200 synsets + 5 + 5 function/kridanta + 20 verb phrases
  CHECK(split_lines(read_file(out + "/augmented.src")).size() == 730);
  std::string tags = read_file(out + "/augmented.tags.tsv");
  CHECK(split_lines(tags).size() == 730);
  CHECK(tags.find("\tsynset\n") != std::string::npos);
  CHECK(tags.find("\tverb_phrase\n") != std::string::npos);

  std::map<std::string, std::string> tuning = kv(out + "/tuning.tsv");
  REQUIRE(tuning.count("initial_bleu"));
  REQUIRE(tuning.count("final_bleu"));
  CHECK(parse_double(tuning["final_bleu"], "final_bleu") >=
        parse_double(tuning["initial_bleu"], "initial_bleu"));
  ModelWeights tuned = ModelWeights::from_tsv(read_file(out + "/weights.tsv"), "weights.tsv");
  (void)tuned;

  std::map<std::string, std::string> stats = kv(out + "/translation_stats.tsv");
  CHECK(stats["sentences"] == "50");
  CHECK(stats["oov_copies"] == "0");  // every test word is covered once augmented

  std::map<std::string, std::string> report = kv(out + "/report.tsv");
  CHECK(report["label"] == "synth");
  CHECK(report["sentences"] == "50");
  REQUIRE(report.count("bleu"));
  REQUIRE(report.count("ter"));
  REQUIRE(report.count("meteor-exact"));
  CHECK(report["oov_copies"] == "0");
  REQUIRE(report.count("weights_hash"));
  CHECK(parse_double(report["bleu"], "bleu") > 0.9);
  CHECK(split_lines(read_file(out + "/report.sentences.tsv")).size() == 50);

  // a second pass over every stage is a no-op
  for (Stage s : stages) {
    StageResult r = run_stage(s, cfg);
    INFO(to_string(s));
    CHECK(r.skipped);
  }

  // touching an input re-triggers only the stages that consume it
  std::string extra_src = synthfix::src_word(1) + " " + synthfix::src_word(2) + "\n";
  std::string extra_ref = synthfix::tgt_word(1) + " " + synthfix::tgt_word(2) + "\n";
  write_file(f.test_source, read_file(f.test_source) + extra_src);
  write_file(f.test_reference, read_file(f.test_reference) + extra_ref);
  CHECK(run_stage(Stage::train, cfg).skipped);
  CHECK_FALSE(run_stage(Stage::translate, cfg).skipped);
  CHECK_FALSE(run_stage(Stage::evaluate, cfg).skipped);
  CHECK(split_lines(read_file(out + "/translation.txt")).size() == 51);
  CHECK(kv(out + "/report.tsv")["sentences"] == "51");

  // a config change also invalidates the manifest
  cfg.label = "renamed";
  CHECK_FALSE(run_stage(Stage::evaluate, cfg).skipped);
  CHECK(kv(out + "/report.tsv")["label"] == "renamed");

  // a half-written stats file is rejected rather than trusted
  write_file(out + "/translation_stats.tsv", "sentences\t51\n");
  CHECK_THROWS_WITH(run_stage(Stage::evaluate, cfg),
                    "malformed translation_stats.tsv; run translate");
}

TEST_CASE("the experiment ladder runs five systems and improves with resources",
          "[pipeline][ladder]") {
  synthfix::Fixture f = synthfix::write_fixture(fresh_dir("fixture_ladder"));
  std::string out = fresh_dir("ladder");
  ExperimentConfig cfg = synthfix::fixture_config(f, out);

  std::vector<std::pair<std::string, std::string>> seen;  // rung, stage
  std::vector<std::string> reports = run_ladder(cfg, [&](const std::string& rung,
                                                         const StageResult& r) {
    seen.push_back({rung, to_string(r.stage)});
    CHECK_FALSE(r.skipped);
  });

  REQUIRE(reports.size() == 5);
  CHECK(reports[0] == out + "/rung1_uncleaned/report.tsv");
  CHECK(reports[4] == out + "/rung5_verb_phrases/report.tsv");
  for (const std::string& path : reports) CHECK(file_exists(path));

  // stage schedule per rung: no clean on rung 1, lexicon only from rung 3 on
  auto stages_of = [&](const std::string& rung) {
    std::vector<std::string> stages;
    for (const auto& [r, s] : seen)
      if (r == rung) stages.push_back(s);
    return stages;
  };
  CHECK(stages_of("uncleaned") ==
        std::vector<std::string>{"augment", "train", "translate", "evaluate"});
  CHECK(stages_of("cleaned") ==
        std::vector<std::string>{"clean", "augment", "train", "translate", "evaluate"});
  CHECK(stages_of("wordnet") == std::vector<std::string>{"clean", "extract-lexicon", "augment",
                                                         "train", "translate", "evaluate"});

  std::vector<std::map<std::string, std::string>> rung_report;
  for (const std::string& path : reports) rung_report.push_back(kv(path));
  CHECK(rung_report[0]["label"] == "synth_uncleaned");
  CHECK(rung_report[2]["label"] == "synth_wordnet");

  // each richer training corpus contains the previous one as a multiset
  const char* dirs[5] = {"rung1_uncleaned", "rung2_cleaned", "rung3_wordnet",
                         "rung4_function_kridanta", "rung5_verb_phrases"};
  for (int k = 1; k < 4; ++k) {
    std::vector<std::string> small = sorted_lines(out + "/" + dirs[k] + "/augmented.src");
    std::vector<std::string> big = sorted_lines(out + "/" + dirs[k + 1] + "/augmented.src");
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    CHECK(big.size() > small.size());
  }

  // the linked lexicon eliminates the dictionary-word copies and lifts BLEU
  auto oov_of = [&](int k) {
    return parse_uint(kv(out + "/" + dirs[k] + "/translation_stats.tsv")["oov_copies"], "oov");
  };
  auto bleu_of = [&](int k) { return parse_double(rung_report[k]["bleu"], "bleu"); };
  CHECK(oov_of(1) == 80);
  CHECK(oov_of(2) == 0);
  CHECK(bleu_of(2) > bleu_of(1));
  CHECK(bleu_of(4) >= bleu_of(3));

  // a rerun is fully manifest-skipped
  size_t skipped = 0;
  run_ladder(cfg, [&](const std::string&, const StageResult& r) { skipped += r.skipped; });
  CHECK(skipped == seen.size());

  // and an independent run in a fresh directory reproduces every report
  std::string out2 = fresh_dir("ladder_again");
  ExperimentConfig cfg2 = synthfix::fixture_config(f, out2);
  std::vector<std::string> reports2 = run_ladder(cfg2);
  REQUIRE(reports2.size() == 5);
  for (size_t k = 0; k < 5; ++k) {
    CHECK(read_file(reports2[k]) == read_file(reports[k]));
  }
}
