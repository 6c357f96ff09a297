// smtkit/tests/acceptance_main.cpp
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

// End-to-end acceptance checks, one PASS/FAIL line each.  Exits non-zero if
// any check fails.  Tolerances and runtime budgets are pinned here:
//   probability normalization   1e-9
//   score / metric agreement    1e-9 (oracles), 1e-6 (hand-derived values)
//   EM toy corpus               < 1 s
//   extraction / decoder oracle < 10 s each
//   synthetic end-to-end ladder < 120 s

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "smtkit/pipeline.hpp"
#include "synthetic.hpp"

using namespace smtkit;

namespace {

int g_failures = 0;

void check(const std::string& name, bool ok, const std::string& detail = "") {
  if (ok) {
    std::printf("PASS: %s\n", name.c_str());
  } else {
    ++g_failures;
    std::printf("FAIL: %s%s\n", name.c_str(), detail.empty() ? "" : ("  [" + detail + "]").c_str());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ParallelCorpus toy_corpus(const std::vector<std::pair<std::string, std::string>>& pairs) {
  ParallelCorpus corpus;
  corpus.source_lang = "mr";
  corpus.target_lang = "hi";
  for (size_t k = 0; k < pairs.size(); ++k) {
    corpus.pairs.push_back(
        {k, split_tokens(pairs[k].first), split_tokens(pairs[k].second), PairOrigin::corpus});
  }
  return corpus;
}

// --- criterion: EM correctness --------------------------------------------

void check_em_correctness() {
  auto start = std::chrono::steady_clock::now();
  ParallelCorpus corpus = toy_corpus({{"अ ब", "x y"},
                                      {"ब ग", "y z"},
                                      {"अ ग", "x z"},
                                      {"अ ब ग", "x y z"},
                                      {"ब", "y"}});
  EMConfig config;
  config.iterations = 15;
  config.epsilon = 0.0;  // run all 15 iterations
  uint32_t iterations_seen = 0;
  double worst_norm = 0.0;
  EMResult result = train_model1(corpus, config, [&](uint32_t, const TranslationTable& t) {
    ++iterations_seen;
    worst_norm = std::max(worst_norm, t.max_normalization_error());
  });
  bool monotone = true;
  for (size_t k = 1; k < result.log_likelihood.size(); ++k)
    if (result.log_likelihood[k] < result.log_likelihood[k - 1] - 1e-9) monotone = false;
  double elapsed = seconds_since(start);
  check("em log-likelihood non-decreasing over 15 iterations",
        monotone && iterations_seen == 15 && result.log_likelihood.size() == 15,
        "iterations " + std::to_string(iterations_seen));
  check("em distributions sum to 1 within 1e-9 after every iteration", worst_norm < 1e-9,
        "worst " + format_sig(worst_norm, 3));
  check("em toy corpus trains in under 1 s", elapsed < 1.0, format_sig(elapsed, 3) + " s");
}

// --- criterion: alignment convergence --------------------------------------

void check_alignment_convergence() {
  ParallelCorpus corpus = toy_corpus({{"अ ब", "x y"}, {"अ", "x"}});
  EMConfig config;
  config.iterations = 50;
  config.epsilon = 1e-12;
  EMResult result = train_model1(corpus, config);
  double t = result.table.prob("अ", "x");
  check("alignment converges: t(x|source word) > 0.9", t > 0.9, "t " + format_sig(t, 6));
}

// --- criterion: phrase extraction matches brute force -----------------------

// Enumerates every box and tests consistency directly from the link matrix.
std::set<std::string> brute_force_boxes(const SentencePair& pair, const AlignmentLinkSet& links,
                                        uint32_t max_len) {
  std::set<std::string> out;
  uint32_t n = static_cast<uint32_t>(pair.source.size());
  uint32_t m = static_cast<uint32_t>(pair.target.size());
  for (uint32_t i1 = 0; i1 < n; ++i1)
    for (uint32_t i2 = i1; i2 < n && i2 - i1 < max_len; ++i2)
      for (uint32_t j1 = 0; j1 < m; ++j1)
        for (uint32_t j2 = j1; j2 < m && j2 - j1 < max_len; ++j2) {
          bool any_inside = false, consistent = true;
          bool at_i1 = false, at_i2 = false, at_j1 = false, at_j2 = false;
          for (const auto& [ls, lt] : links.links) {
            bool in_s = ls >= i1 && ls <= i2;
            bool in_t = lt >= j1 && lt <= j2;
            if (in_s != in_t) consistent = false;
            if (in_s && in_t) {
              any_inside = true;
              at_i1 |= ls == i1;
              at_i2 |= ls == i2;
              at_j1 |= lt == j1;
              at_j2 |= lt == j2;
            }
          }
          if (!any_inside || !consistent || !at_i1 || !at_i2 || !at_j1 || !at_j2) continue;
          std::string key;
          for (uint32_t i = i1; i <= i2; ++i) key += pair.source[i] + " ";
          key += "|||";
          for (uint32_t j = j1; j <= j2; ++j) key += " " + pair.target[j];
          out.insert(key);
        }
  return out;
}

void check_phrase_oracle() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(97531);
  size_t trials = 500, mismatches = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    uint32_t n = 1 + rng() % 5, m = 1 + rng() % 5;
    SentencePair pair;
    pair.id = trial;
    for (uint32_t i = 0; i < n; ++i) pair.source.push_back("s" + std::to_string(i));
    for (uint32_t j = 0; j < m; ++j) pair.target.push_back("t" + std::to_string(j));
    AlignmentLinkSet links;
    links.pair_id = trial;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < m; ++j)
        if (rng() % 10 < 3) links.links.insert({i, j});
    uint32_t max_len = 1 + rng() % 5;

    std::set<std::string> got;
    for (const PhrasePair& p : extract_phrases(pair, links, max_len))
      got.insert(join(p.source, " ") + " ||| " + join(p.target, " "));
    if (got != brute_force_boxes(pair, links, max_len)) ++mismatches;
  }
  double elapsed = seconds_since(start);
  check("phrase extraction equals brute-force enumeration on 500 random alignments",
        mismatches == 0, std::to_string(mismatches) + " mismatches");
  check("phrase extraction oracle comparison runs in under 10 s", elapsed < 10.0,
        format_sig(elapsed, 3) + " s");
}

// --- criterion: decoder matches exhaustive search ---------------------------

struct DecOracle {
  struct Opt {
    uint32_t begin = 0, end = 0;
    std::vector<Token> target;
    PhraseFeatures features;
  };
  const NGramModel* lm = nullptr;
  ModelWeights weights;
  std::vector<Opt> opts;
  size_t n = 0;
  bool found = false;
  double best = 0.0;

  void rec(uint32_t mask, uint32_t last_end, const NGramModel::State& state, double score,
           size_t tgt_len, int dl, double ratio) {
    static const double ln10 = std::log(10.0);
    if (mask == (1u << n) - 1) {
      double final_score = score + weights.lm * ln10 * lm->end_log10(state);
      if (!found || final_score > best) {
        found = true;
        best = final_score;
      }
      return;
    }
    for (const Opt& o : opts) {
      bool free = true;
      for (uint32_t p = o.begin; p < o.end; ++p)
        if (mask >> p & 1) free = false;
      if (!free) continue;
      int64_t delta = static_cast<int64_t>(o.begin) - static_cast<int64_t>(last_end);
      uint32_t jump = static_cast<uint32_t>(delta < 0 ? -delta : delta);
      if (dl >= 0 && jump > static_cast<uint32_t>(dl)) continue;
      if (ratio > 0.0 &&
          static_cast<double>(tgt_len + o.target.size()) > ratio * static_cast<double>(n))
        continue;
      NGramModel::State st = state;
      double lm_log10 = 0.0;
      for (const Token& w : o.target) {
        auto [lp, next] = lm->advance(st, w);
        lm_log10 += lp;
        st = std::move(next);
      }
      double inc = weights.phrase_fwd * std::log(o.features.phrase_fwd) +
                   weights.phrase_rev * std::log(o.features.phrase_rev) +
                   weights.lex_fwd * std::log(o.features.lex_fwd) +
                   weights.lex_rev * std::log(o.features.lex_rev) + weights.lm * ln10 * lm_log10 -
                   weights.word_penalty * static_cast<double>(o.target.size()) -
                   weights.distortion * static_cast<double>(jump);
      uint32_t next_mask = mask;
      for (uint32_t p = o.begin; p < o.end; ++p) next_mask |= 1u << p;
      rec(next_mask, o.end, st, score + inc, tgt_len + o.target.size(), dl, ratio);
    }
  }
};

void check_decoder_oracle() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(24680);
  auto uniform = [&rng]() { return std::uniform_real_distribution<double>(0.05, 1.0)(rng); };
  std::vector<std::vector<Token>> lm_text;
  for (const char* s : {"t0 t1 t2", "t3 t4", "t1 t4 t0", "t2 t2"}) lm_text.push_back(split_tokens(s));
  NGramModel lm = NGramModel::train(lm_text, 2, 0.1);

  size_t trials = 100, mismatches = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    PhraseTable table;
    for (int e = 0; e < 20; ++e) {
      std::vector<Token> src;
      for (uint32_t i = 0; i < 1 + rng() % 2; ++i) src.push_back("s" + std::to_string(rng() % 3));
      PhraseOption o;
      for (uint32_t i = 0; i < 1 + rng() % 3; ++i) o.target.push_back("t" + std::to_string(rng() % 5));
      o.features = {uniform(), uniform(), uniform(), uniform()};
      table.add(src, std::move(o));
    }
    table.sort_options();

    uint32_t n = 1 + rng() % 3;
    std::vector<Token> source;
    for (uint32_t i = 0; i < n; ++i)
      source.push_back(rng() % 5 == 0 ? "u" + std::to_string(rng() % 2)
                                      : "s" + std::to_string(rng() % 3));

    ModelWeights w;
    w.phrase_fwd = uniform();
    w.phrase_rev = uniform();
    w.lex_fwd = uniform();
    w.lex_rev = uniform();
    w.lm = uniform();
    w.word_penalty = (trial % 3 == 0) ? -0.2 : 0.3;
    w.distortion = 0.5 * uniform();
    DecoderConfig cfg;
    cfg.beam_size = 1000;
    cfg.distortion_limit = (trial % 4 == 0) ? 1 : 6;
    cfg.max_length_ratio = 3.0;

    DecOracle oracle;
    oracle.lm = &lm;
    oracle.weights = w;
    oracle.n = n;
    size_t max_len = std::min<size_t>(n, table.max_source_len());
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t len = 1; len <= max_len && i + len <= n; ++len) {
        std::vector<Token> span(source.begin() + i, source.begin() + i + len);
        const std::vector<PhraseOption>* opts = table.lookup(span);
        if (opts)
          for (const PhraseOption& o : *opts)
            oracle.opts.push_back({i, i + len, o.target, o.features});
        if (len == 1 && !opts)
          oracle.opts.push_back(
              {i, i + 1, {source[i]}, {kOovFeature, kOovFeature, kOovFeature, kOovFeature}});
      }
    oracle.rec(0, 0, lm.begin_state(), 0.0, 0, cfg.distortion_limit, cfg.max_length_ratio);
    if (!oracle.found) {
      oracle.rec(0, 0, lm.begin_state(), 0.0, 0, -1, cfg.max_length_ratio);
    }
    if (!oracle.found) {
      oracle.rec(0, 0, lm.begin_state(), 0.0, 0, -1, 0.0);
    }

    TranslationResult got = translate(source, table, lm, w, cfg);
    if (!oracle.found || std::abs(got.score - oracle.best) > 1e-9) ++mismatches;
  }
  double elapsed = seconds_since(start);
  check("decoder best score equals exhaustive enumeration on 100 random instances",
        mismatches == 0, std::to_string(mismatches) + " mismatches");
  check("decoder oracle comparison runs in under 10 s", elapsed < 10.0,
        format_sig(elapsed, 3) + " s");
}

// --- criterion: metric hand checks ------------------------------------------

void check_metric_hand_values() {
  const double tol = 1e-6;

  std::vector<std::vector<Token>> refs = {split_tokens("क ख ग घ ङ च"),
                                          split_tokens("छ ज झ ञ ट")};
  double identity = corpus_bleu(refs, refs, {4, false});
  check("bleu identity is 1.0", std::abs(identity - 1.0) < tol, format_sig(identity, 9));

  // "the" appears twice in the reference, so 7 copies clip to 2/7
  double clipped = corpus_bleu({split_tokens("the the the the the the the")},
                               {split_tokens("the cat is on the mat")}, {1, false});
  check("bleu clipped precision case is 2/7", std::abs(clipped - 2.0 / 7.0) < tol,
        format_sig(clipped, 9));

  // perfect 4-token prefix of an 8-token reference: precisions 1, BP = e^-1
  double bp = corpus_bleu({split_tokens("a b c d")}, {split_tokens("a b c d e f g h")},
                          {4, false});
  check("bleu brevity penalty case is e^-1", std::abs(bp - std::exp(-1.0)) < tol,
        format_sig(bp, 9));

  std::vector<Token> five = split_tokens("क ख ग घ ङ");
  std::vector<Token> five_sub = split_tokens("क ख च घ ङ");
  double t0 = ter(five, five);
  double t1 = ter(five_sub, five);
  double t2 = ter(split_tokens("b a"), split_tokens("a b"));
  check("ter identity is 0.0", t0 == 0.0, format_sig(t0, 9));
  check("ter single substitution over 5 tokens is 0.2", std::abs(t1 - 0.2) < tol,
        format_sig(t1, 9));
  check("ter swap resolved by one shift is 0.5", std::abs(t2 - 0.5) < tol, format_sig(t2, 9));

  std::vector<Token> four = split_tokens("क ख ग घ");
  double m = meteor_exact(four, four);
  check("meteor identity for 4 tokens is 0.9921875", std::abs(m - 0.9921875) < tol,
        format_sig(m, 9));
}

// --- criterion: subjective formula ------------------------------------------

void check_subjective_formula() {
  SubjectiveSheet sheet;
  auto fill = [&sheet](uint32_t score, int count) {
    for (int k = 0; k < count; ++k) {
      SubjectiveRow row;
      row.id = sheet.rows.size() + 1;
      row.adequacy = score;
      row.fluency = 5;
      sheet.rows.push_back(row);
    }
  };
  fill(5, 50);
  fill(4, 30);
  fill(3, 10);
  fill(2, 5);
  fill(1, 5);
  SubjectiveScores scores = subjective_score(sheet);
  check("subjective banded formula gives exactly 80.0", scores.adequacy_pct == 80.0,
        format_sig(scores.adequacy_pct, 17));
  check("subjective all-5 sheet gives exactly 100.0", scores.fluency_pct == 100.0,
        format_sig(scores.fluency_pct, 17));

  for (SubjectiveRow& row : sheet.rows) {
    row.adequacy = 1;
    row.fluency = 2;
  }
  SubjectiveScores low = subjective_score(sheet);
  check("subjective sheet without scores above 2 gives exactly 0.0",
        low.adequacy_pct == 0.0 && low.fluency_pct == 0.0,
        format_sig(low.adequacy_pct, 3) + " / " + format_sig(low.fluency_pct, 3));
}

// --- criteria on the synthetic end-to-end ladder ----------------------------

std::map<std::string, std::string> read_kv(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const std::string& line : split_lines(read_file(path))) {
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 2) out[fields[0]] = fields[1];
  }
  return out;
}

void check_ladder_criteria() {
  namespace fs = std::filesystem;
  auto start = std::chrono::steady_clock::now();
  const std::string base = "/tmp/smtkit_acceptance";
  fs::remove_all(base);
  synthfix::Fixture f = synthfix::write_fixture(base + "/fixture");

  ExperimentConfig cfg = synthfix::fixture_config(f, base + "/run1");
  std::vector<std::string> reports1 = run_ladder(cfg);
  double ladder_elapsed = seconds_since(start);

  bool ladder_ok = reports1.size() == 5;
  for (const std::string& path : reports1) ladder_ok = ladder_ok && file_exists(path);
  check("five-rung ladder completes", ladder_ok);
  check("synthetic ladder finishes in under 120 s", ladder_elapsed < 120.0,
        format_sig(ladder_elapsed, 3) + " s");
  if (!ladder_ok) return;

  uint64_t oov_baseline =
      parse_uint(read_kv(base + "/run1/rung2_cleaned/translation_stats.tsv")["oov_copies"], "oov");
  uint64_t oov_augmented =
      parse_uint(read_kv(base + "/run1/rung3_wordnet/translation_stats.tsv")["oov_copies"], "oov");
  double bleu_baseline = parse_double(read_kv(reports1[1])["bleu"], "bleu");
  double bleu_augmented = parse_double(read_kv(reports1[2])["bleu"], "bleu");
  double bleu_rung4 = parse_double(read_kv(reports1[3])["bleu"], "bleu");
  double bleu_rung5 = parse_double(read_kv(reports1[4])["bleu"], "bleu");

  check("lexicon augmentation strictly reduces OOV copies", oov_augmented < oov_baseline,
        std::to_string(oov_augmented) + " vs " + std::to_string(oov_baseline));
  check("lexicon augmentation strictly raises BLEU", bleu_augmented > bleu_baseline,
        format_sig(bleu_augmented, 6) + " vs " + format_sig(bleu_baseline, 6));
  check("verb-phrase pairs do not decrease BLEU", bleu_rung5 >= bleu_rung4,
        format_sig(bleu_rung5, 6) + " vs " + format_sig(bleu_rung4, 6));

  // tuning direction, on the baseline system's models and the synthetic dev set
  const std::string rung2 = base + "/run1/rung2_cleaned";
  PhraseTable table = PhraseTable::from_text(read_file(rung2 + "/phrase_table.txt"), "table");
  NGramModel lm = NGramModel::from_tsv(read_file(rung2 + "/lm.tsv"), "lm");
  ParallelCorpus dev = load_tokenized_parallel(f.dev_source, f.dev_target, "mr", "hi");
  std::vector<std::vector<Token>> dev_src, dev_ref;
  for (const SentencePair& p : dev.pairs) {
    dev_src.push_back(p.source);
    dev_ref.push_back(p.target);
  }
  TuneResult tuned = tune(dev_src, dev_ref, table, lm, cfg.weights, cfg.decoder, cfg.tuner);
  check("tuned dev BLEU never falls below the starting point",
        tuned.final_bleu >= tuned.initial_bleu,
        format_sig(tuned.final_bleu, 6) + " vs " + format_sig(tuned.initial_bleu, 6));

  // determinism: an independent run reproduces every report byte for byte
  ExperimentConfig cfg2 = synthfix::fixture_config(f, base + "/run2");
  std::vector<std::string> reports2 = run_ladder(cfg2);
  bool identical = reports2.size() == reports1.size();
  for (size_t k = 0; identical && k < reports1.size(); ++k)
    identical = read_file(reports1[k]) == read_file(reports2[k]);
  check("two ladder runs produce byte-identical reports", identical);
}

}  // namespace

int main() {
  try {
    check_em_correctness();
    check_alignment_convergence();
    check_phrase_oracle();
    check_decoder_oracle();
    check_metric_hand_values();
    check_subjective_formula();
    check_ladder_criteria();
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("FAIL: unexpected exception  [%s]\n", e.what());
  }
  if (g_failures) {
    std::printf("%d acceptance check(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
