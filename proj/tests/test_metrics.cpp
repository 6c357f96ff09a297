// smtkit/tests/test_metrics.cpp
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
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "smtkit/metrics.hpp"

using namespace smtkit;

namespace {

std::vector<Token> toks(const std::string& s) { return split_tokens(s); }

// Full-matrix edit distance, independent of the rolling-row production code.
uint64_t lev_oracle(const std::vector<Token>& a, const std::vector<Token>& b) {
  std::vector<std::vector<uint64_t>> d(a.size() + 1, std::vector<uint64_t>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

// Exhaustive chunk minimum: try every one-to-one assignment of hypothesis
// positions to same-token reference positions, keep assignments whose
// per-type match counts hit min(hyp count, ref count) exactly, and count
// contiguous runs. No pruning, no quota short-cuts.
std::pair<uint64_t, uint64_t> meteor_oracle(const std::vector<Token>& hyp,
                                            const std::vector<Token>& ref) {
  std::map<Token, uint64_t> hc, rc, quota;
  for (const Token& w : hyp) hc[w] += 1;
  for (const Token& w : ref) rc[w] += 1;
  uint64_t matches = 0;
  for (const auto& [w, c] : hc) {
    auto it = rc.find(w);
    if (it != rc.end()) {
      quota[w] = std::min(c, it->second);
      matches += quota[w];
    }
  }
  if (matches == 0) return {0, 0};

  uint64_t best = UINT64_MAX;
  std::vector<int64_t> assign(hyp.size(), -1);
  std::vector<bool> used(ref.size(), false);
  std::function<void(size_t)> rec = [&](size_t pos) {
    if (pos == hyp.size()) {
      std::map<Token, uint64_t> got;
      for (size_t p = 0; p < hyp.size(); ++p) {
        if (assign[p] >= 0) got[hyp[p]] += 1;
      }
      if (got != quota) return;
      uint64_t chunks = 0;
      int64_t lh = -5, lr = -5;
      for (size_t p = 0; p < hyp.size(); ++p) {
        if (assign[p] < 0) continue;
        if (!(static_cast<int64_t>(p) == lh + 1 && assign[p] == lr + 1)) ++chunks;
        lh = static_cast<int64_t>(p);
        lr = assign[p];
      }
      best = std::min(best, chunks);
      return;
    }
    rec(pos + 1);  // leave unmatched
    for (size_t r = 0; r < ref.size(); ++r) {
      if (used[r] || ref[r] != hyp[pos]) continue;
      used[r] = true;
      assign[pos] = static_cast<int64_t>(r);
      rec(pos + 1);
      assign[pos] = -1;
      used[r] = false;
    }
  };
  rec(0);
  return {matches, best};
}

std::vector<Token> random_sentence(std::mt19937& rng, uint32_t max_len, uint32_t alphabet) {
  uint32_t len = rng() % (max_len + 1);
  std::vector<Token> out;
  for (uint32_t i = 0; i < len; ++i) out.push_back(std::string(1, 'a' + rng() % alphabet));
  return out;
}

}  // namespace

TEST_CASE("bleu of a corpus against itself is one", "[metrics]") {
  std::vector<std::vector<Token>> c = {toks("घर आहे तो बड़ा है"), toks("यह वह नाराज हो गया")};
  CHECK_THAT(corpus_bleu(c, c), Catch::Matchers::WithinAbs(1.0, 0.0));
  // smoothed identity holds even for short sentences
  std::vector<std::vector<Token>> s = {toks("घर"), toks("अ ब")};
  CHECK_THAT(corpus_bleu(s, s, {4, true}), Catch::Matchers::WithinAbs(1.0, 0.0));
}

TEST_CASE("bleu clips repeated unigrams", "[metrics]") {
  std::vector<std::vector<Token>> hyp = {toks("the the the the the the the")};
  std::vector<std::vector<Token>> ref = {toks("the cat is on the mat")};
  CHECK_THAT(corpus_bleu(hyp, ref, {1, false}),
             Catch::Matchers::WithinAbs(2.0 / 7.0, 1e-12));
  // all higher-order precisions are zero, so 4-gram BLEU collapses
  CHECK(corpus_bleu(hyp, ref) == 0.0);
}

TEST_CASE("brevity penalty", "[metrics]") {
  std::vector<Token> ref = toks("t1 t2 t3 t4 t5 t6 t7 t8");
  std::vector<Token> hyp(ref.begin(), ref.begin() + 4);  // perfect but half length
  CHECK_THAT(corpus_bleu({hyp}, {ref}), Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-12));
  // no penalty when the hypothesis is longer
  std::vector<Token> longer = ref;
  longer.push_back("extra");
  double b = corpus_bleu({longer}, {ref});
  double expected = std::exp((std::log(8.0 / 9.0) + std::log(7.0 / 8.0) + std::log(6.0 / 7.0) +
                              std::log(5.0 / 6.0)) /
                             4.0);
  CHECK_THAT(b, Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("bleu smoothing touches orders two and up only", "[metrics]") {
  std::vector<std::vector<Token>> hyp = {toks("a b")};
  std::vector<std::vector<Token>> ref = {toks("a c")};
  CHECK(corpus_bleu(hyp, ref, {2, false}) == 0.0);
  // p1 stays raw 1/2; p2 becomes (0+1)/(1+1)
  CHECK_THAT(corpus_bleu(hyp, ref, {2, true}),
             Catch::Matchers::WithinAbs(std::sqrt(0.5 * 0.5), 1e-12));
  // at max_n 4 the empty trigram/fourgram orders smooth to (0+1)/(0+1) = 1,
  // so the mean is (1/2 * 1/2 * 1 * 1)^(1/4)
  CHECK_THAT(sentence_bleu(toks("a b"), toks("a c")),
             Catch::Matchers::WithinAbs(std::pow(0.25, 0.25), 1e-12));
}

TEST_CASE("bleu validates inputs", "[metrics]") {
  std::vector<std::vector<Token>> two = {toks("a"), toks("b")};
  std::vector<std::vector<Token>> three = {toks("a"), toks("b"), toks("c")};
  CHECK_THROWS_WITH(corpus_bleu(two, three),
                    Catch::Matchers::StartsWith("hypothesis/reference count mismatch 2 vs 3"));
  CHECK_THROWS_AS(corpus_bleu({}, {}), Error);
  // empty hypotheses give zero, not a crash
  CHECK(corpus_bleu({{}}, {toks("a b")}) == 0.0);
}

TEST_CASE("corpus metrics are invariant under sentence permutation", "[metrics]") {
  std::mt19937 rng(7);
  std::vector<std::vector<Token>> hyps, refs;
  for (int i = 0; i < 12; ++i) {
    refs.push_back(random_sentence(rng, 8, 4));
    if (refs.back().empty()) refs.back().push_back("a");
    hyps.push_back(rng() % 3 ? refs.back() : random_sentence(rng, 8, 4));
  }
  double bleu = corpus_bleu(hyps, refs, {4, true});
  double t = corpus_ter(hyps, refs);
  double m = corpus_meteor(hyps, refs);

  std::vector<size_t> order(hyps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Token>> h2, r2;
  for (size_t i : order) {
    h2.push_back(hyps[i]);
    r2.push_back(refs[i]);
  }
  CHECK_THAT(corpus_bleu(h2, r2, {4, true}), Catch::Matchers::WithinAbs(bleu, 1e-12));
  CHECK_THAT(corpus_ter(h2, r2), Catch::Matchers::WithinAbs(t, 1e-12));
  CHECK_THAT(corpus_meteor(h2, r2), Catch::Matchers::WithinAbs(m, 1e-12));
}

TEST_CASE("levenshtein matches a full-matrix oracle", "[metrics]") {
  CHECK(levenshtein(toks("a b c"), toks("a b c")) == 0);
  CHECK(levenshtein({}, toks("a b")) == 2);
  CHECK(levenshtein(toks("a b"), {}) == 2);
  std::mt19937 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Token> a = random_sentence(rng, 8, 3);
    std::vector<Token> b = random_sentence(rng, 8, 3);
    CHECK(levenshtein(a, b) == lev_oracle(a, b));
  }
}

TEST_CASE("ter hand cases", "[metrics]") {
  CHECK(ter(toks("a b c d e"), toks("a b c d e")) == 0.0);
  CHECK_THAT(ter(toks("a x c d e"), toks("a b c d e")), Catch::Matchers::WithinAbs(0.2, 1e-12));
  // one block shift instead of two substitutions
  TerBreakdown swapped = ter_edits(toks("b a"), toks("a b"));
  CHECK(swapped.edits == 1);
  CHECK(swapped.shifts == 1);
  CHECK_THAT(ter(toks("b a"), toks("a b")), Catch::Matchers::WithinAbs(0.5, 1e-12));
  // shifting the head to the tail
  TerBreakdown rotated = ter_edits(toks("c a b"), toks("a b c"));
  CHECK(rotated.edits == 1);
  CHECK(rotated.shifts == 1);
  CHECK_THROWS_AS(ter(toks("a"), {}), Error);
  // deleting everything
  CHECK_THAT(ter(toks("a b c d"), toks("x")), Catch::Matchers::WithinAbs(4.0, 1e-12));
}

TEST_CASE("ter never exceeds plain edit distance", "[metrics]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Token> hyp = random_sentence(rng, 8, 3);
    std::vector<Token> ref = random_sentence(rng, 8, 3);
    if (ref.empty()) ref.push_back("a");
    TerBreakdown br = ter_edits(hyp, ref);
    CHECK(br.edits <= levenshtein(hyp, ref));
    double t = ter(hyp, ref);
    CHECK(t >= 0.0);
    CHECK(t <= static_cast<double>(std::max(hyp.size(), ref.size())) /
                   static_cast<double>(ref.size()));
    // deterministic
    CHECK(ter_edits(hyp, ref).edits == br.edits);
  }
}

TEST_CASE("corpus ter pools edits over reference length", "[metrics]") {
  std::vector<std::vector<Token>> hyps = {toks("b a"), toks("a x c")};
  std::vector<std::vector<Token>> refs = {toks("a b"), toks("a b c")};
  // edits: 1 (shift) + 1 (substitution), ref tokens: 5
  CHECK_THAT(corpus_ter(hyps, refs), Catch::Matchers::WithinAbs(2.0 / 5.0, 1e-12));
  CHECK_THROWS_AS(corpus_ter({}, {}), Error);
}

TEST_CASE("meteor identity and fragmentation", "[metrics]") {
  // perfect 4-token match: one chunk, penalty 0.5*(1/4)^3
  CHECK_THAT(meteor_exact(toks("क ख ग घ"), toks("क ख ग घ")),
             Catch::Matchers::WithinAbs(0.9921875, 1e-15));
  // same words, tail swapped: three chunks out of four matches
  CHECK_THAT(meteor_exact(toks("a b d c"), toks("a b c d")),
             Catch::Matchers::WithinAbs(0.7890625, 1e-15));
  // disjoint
  CHECK(meteor_exact(toks("a b"), toks("c d")) == 0.0);
  CHECK(meteor_exact({}, toks("a")) == 0.0);
  CHECK(meteor_exact(toks("a"), {}) == 0.0);
}

TEST_CASE("meteor clips repeated words", "[metrics]") {
  // m = 1, P = 1/2, R = 1, fmean = 10PR/(R+9P) = 10/11, penalty 0.5
  CHECK_THAT(meteor_exact(toks("the the"), toks("the")),
             Catch::Matchers::WithinAbs(5.0 / 11.0, 1e-12));
  MeteorStats st = meteor_stats(toks("the the"), toks("the"));
  CHECK(st.matches == 1);
  CHECK(st.chunks == 1);
}

TEST_CASE("meteor stats match the exhaustive oracle", "[metrics]") {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Token> hyp = random_sentence(rng, 5, 3);
    std::vector<Token> ref = random_sentence(rng, 5, 3);
    auto [matches, chunks] = meteor_oracle(hyp, ref);
    MeteorStats st = meteor_stats(hyp, ref);
    INFO("hyp=" << join(hyp, " ") << " ref=" << join(ref, " "));
    CHECK(st.matches == matches);
    if (matches > 0) {
      CHECK(st.chunks == chunks);
    }
  }
}

TEST_CASE("corpus meteor pools stats not scores", "[metrics]") {
  std::vector<std::vector<Token>> hyps = {toks("a b"), toks("c")};
  std::vector<std::vector<Token>> refs = {toks("a b"), toks("d")};
  // pooled: m=2, hyp_len=3, ref_len=3, chunks=1
  MeteorStats pooled;
  pooled.matches = 2;
  pooled.hyp_len = 3;
  pooled.ref_len = 3;
  pooled.chunks = 1;
  CHECK_THAT(corpus_meteor(hyps, refs),
             Catch::Matchers::WithinAbs(meteor_from_stats(pooled), 1e-12));
}

TEST_CASE("subjective formula", "[metrics]") {
  SubjectiveSheet sheet;
  // adequacy: 50 fives, 30 fours, 10 threes, 10 below; fluency: all fives
  for (uint64_t i = 0; i < 100; ++i) {
    SubjectiveRow row;
    row.id = i;
    row.adequacy = i < 50 ? 5 : i < 80 ? 4 : i < 90 ? 3 : i < 95 ? 2 : 1;
    row.fluency = 5;
    sheet.rows.push_back(row);
  }
  SubjectiveScores s = subjective_score(sheet);
  CHECK(s.adequacy_pct == 80.0);
  CHECK(s.fluency_pct == 100.0);

  SubjectiveSheet low;
  for (uint64_t i = 0; i < 10; ++i) low.rows.push_back({i, i % 2 ? 1u : 2u, 1u});
  SubjectiveScores l = subjective_score(low);
  CHECK(l.adequacy_pct == 0.0);
  CHECK(l.fluency_pct == 0.0);
}

TEST_CASE("subjective csv parsing", "[metrics]") {
  SubjectiveSheet sheet = parse_subjective_csv("id,adequacy,fluency\n0,5,4\n1,3,5\n", "s.csv");
  REQUIRE(sheet.rows.size() == 2);
  CHECK(sheet.rows[0].adequacy == 5);
  CHECK(sheet.rows[1].fluency == 5);

  CHECK_THROWS_WITH(parse_subjective_csv("id,fluency,adequacy\n", "s.csv"),
                    Catch::Matchers::ContainsSubstring("id,adequacy,fluency"));
  CHECK_THROWS_WITH(parse_subjective_csv("id,adequacy,fluency\n0,5\n", "s.csv"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse_subjective_csv("id,adequacy,fluency\n7,6,5\n", "s.csv"),
                    Catch::Matchers::ContainsSubstring("row id 7"));
  CHECK_THROWS_WITH(parse_subjective_csv("id,adequacy,fluency\n1,5,5\n1,4,4\n", "s.csv"),
                    Catch::Matchers::ContainsSubstring("duplicate row id 1"));
  CHECK_THROWS_AS(parse_subjective_csv("id,adequacy,fluency\n", "s.csv"), Error);
  CHECK_THROWS_AS(parse_subjective_csv("", "s.csv"), Error);
}
