// smtkit/metrics.hpp
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smtkit/corpus.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

struct BleuOptions {
  uint32_t max_n = 4;
  bool smooth = false;  // add-one smoothing for n >= 2 only
};

// Corpus BLEU: clipped n-gram precision with geometric mean and brevity
// penalty exp(min(0, 1 - r/c)).  See Papineni et al. (2002).
inline double corpus_bleu(const std::vector<std::vector<Token>>& hyps,
                          const std::vector<std::vector<Token>>& refs,
                          const BleuOptions& opt = {}) {
  if (hyps.size() != refs.size())
    throw Error("hypothesis/reference count mismatch " + std::to_string(hyps.size()) + " vs " +
                std::to_string(refs.size()));
  if (hyps.empty()) throw Error("empty evaluation set");
  if (opt.max_n == 0) throw Error("bleu max_n must be positive");

  uint64_t hyp_total = 0, ref_total = 0;
  std::vector<uint64_t> clipped(opt.max_n, 0), totals(opt.max_n, 0);
  for (size_t s = 0; s < hyps.size(); ++s) {
    const auto& hyp = hyps[s];
    const auto& ref = refs[s];
    hyp_total += hyp.size();
    ref_total += ref.size();
    for (uint32_t n = 1; n <= opt.max_n; ++n) {
      if (hyp.size() + 1 <= n) continue;
      std::map<std::string, uint64_t> hyp_grams, ref_grams;
      for (size_t p = 0; p + n <= hyp.size(); ++p)
        hyp_grams[join(std::vector<Token>(hyp.begin() + p, hyp.begin() + p + n), "\x1f")] += 1;
      for (size_t p = 0; p + n <= ref.size(); ++p)
        ref_grams[join(std::vector<Token>(ref.begin() + p, ref.begin() + p + n), "\x1f")] += 1;
      for (const auto& [gram, count] : hyp_grams) {
        auto it = ref_grams.find(gram);
        if (it != ref_grams.end()) clipped[n - 1] += std::min(count, it->second);
        totals[n - 1] += count;
      }
    }
  }
  if (hyp_total == 0) return 0.0;

  double log_sum = 0.0;
  for (uint32_t n = 1; n <= opt.max_n; ++n) {
    double c = static_cast<double>(clipped[n - 1]);
    double t = static_cast<double>(totals[n - 1]);
    if (opt.smooth && n >= 2) {
      c += 1.0;
      t += 1.0;
    }
    if (c <= 0.0 || t <= 0.0) return 0.0;
    log_sum += std::log(c / t);
  }
  double bp = hyp_total >= ref_total
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_total) / static_cast<double>(hyp_total));
  return bp * std::exp(log_sum / static_cast<double>(opt.max_n));
}

inline double sentence_bleu(const std::vector<Token>& hyp, const std::vector<Token>& ref,
                            const BleuOptions& opt = {4, true}) {
  return corpus_bleu({hyp}, {ref}, opt);
}

inline uint64_t levenshtein(const std::vector<Token>& a, const std::vector<Token>& b) {
  std::vector<uint64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    uint64_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      uint64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[b.size()];
}

// Translation edit rate with greedy block shifts: repeatedly move the block
// (length <= 10) whose move best lowers the remaining edit distance, as long
// as the total (shifts so far + distance) strictly improves; ties prefer the
// leftmost origin, then the longest block, then the leftmost destination.
struct TerBreakdown {
  uint64_t edits = 0;
  uint32_t shifts = 0;
};

inline TerBreakdown ter_edits(const std::vector<Token>& hyp, const std::vector<Token>& ref) {
  constexpr size_t kMaxBlock = 10;
  constexpr uint32_t kMaxShifts = 50;
  std::vector<Token> cur = hyp;
  uint64_t dist = levenshtein(cur, ref);
  uint32_t shifts = 0;
  while (shifts < kMaxShifts && dist >= 2 && !cur.empty()) {
    uint64_t best_gain = 0;
    size_t best_start = 0, best_len = 0, best_dest = 0;
    std::vector<Token> best_cand;
    for (size_t start = 0; start < cur.size(); ++start) {
      for (size_t len = 1; len <= std::min(kMaxBlock, cur.size() - start); ++len) {
        std::vector<Token> rest;
        rest.reserve(cur.size() - len);
        rest.insert(rest.end(), cur.begin(), cur.begin() + start);
        rest.insert(rest.end(), cur.begin() + start + len, cur.end());
        for (size_t dest = 0; dest <= rest.size(); ++dest) {
          if (dest == start) continue;
          std::vector<Token> cand;
          cand.reserve(cur.size());
          cand.insert(cand.end(), rest.begin(), rest.begin() + dest);
          cand.insert(cand.end(), cur.begin() + start, cur.begin() + start + len);
          cand.insert(cand.end(), rest.begin() + dest, rest.end());
          uint64_t d = levenshtein(cand, ref);
          if (d >= dist) continue;
          uint64_t gain = dist - d;
          bool better = gain > best_gain;
          if (gain == best_gain && best_gain > 0) {
            better = start < best_start ||
                     (start == best_start &&
                      (len > best_len || (len == best_len && dest < best_dest)));
          }
          if (better) {
            best_gain = gain;
            best_start = start;
            best_len = len;
            best_dest = dest;
            best_cand = cand;
          }
        }
      }
    }
    if (best_gain < 2) break;  // a shift itself costs one edit
    cur = std::move(best_cand);
    dist -= best_gain;
    ++shifts;
  }
  return {dist + shifts, shifts};
}

inline double ter(const std::vector<Token>& hyp, const std::vector<Token>& ref) {
  if (ref.empty()) throw Error("ter: empty reference");
  return static_cast<double>(ter_edits(hyp, ref).edits) / static_cast<double>(ref.size());
}

inline double corpus_ter(const std::vector<std::vector<Token>>& hyps,
                         const std::vector<std::vector<Token>>& refs) {
  if (hyps.size() != refs.size())
    throw Error("hypothesis/reference count mismatch " + std::to_string(hyps.size()) + " vs " +
                std::to_string(refs.size()));
  if (hyps.empty()) throw Error("empty evaluation set");
  uint64_t edits = 0, ref_len = 0;
  for (size_t s = 0; s < hyps.size(); ++s) {
    if (refs[s].empty()) throw Error("ter: empty reference at sentence " + std::to_string(s + 1));
    edits += ter_edits(hyps[s], refs[s]).edits;
    ref_len += refs[s].size();
  }
  return static_cast<double>(edits) / static_cast<double>(ref_len);
}

struct MeteorStats {
  uint64_t matches = 0;
  uint64_t hyp_len = 0;
  uint64_t ref_len = 0;
  uint64_t chunks = 0;
};

namespace detail {

struct ChunkSearch {
  const std::vector<Token>* hyp;
  const std::vector<Token>* ref;
  std::map<Token, uint64_t> needed;        // matches still to place per type
  std::map<Token, uint64_t> hyp_suffix;    // occurrences of type at >= pos
  std::vector<bool> ref_used;
  uint64_t best = UINT64_MAX;
  uint64_t nodes = 0;
  static constexpr uint64_t kNodeCap = 2000000;

  void dfs(size_t pos, int64_t last_h, int64_t last_r, uint64_t chunks) {
    if (chunks >= best) return;
    if (++nodes > kNodeCap) return;  // keep the best bound found so far
    if (pos == hyp->size()) {
      best = chunks;  // needed is all zero here by the skip rule below
      return;
    }
    const Token& w = (*hyp)[pos];
    auto ni = needed.find(w);
    uint64_t need = ni == needed.end() ? 0 : ni->second;
    if (need > 0) {
      for (size_t r = 0; r < ref->size(); ++r) {
        if (ref_used[r] || (*ref)[r] != w) continue;
        bool adjacent = static_cast<int64_t>(pos) == last_h + 1 &&
                        static_cast<int64_t>(r) == last_r + 1;
        ref_used[r] = true;
        ni->second -= 1;
        dfs(pos + 1, static_cast<int64_t>(pos), static_cast<int64_t>(r),
            chunks + (adjacent ? 0 : 1));
        ni->second += 1;
        ref_used[r] = false;
      }
    }
    // Skip this position only if later occurrences can still fill the quota.
    if (need < hyp_suffix_at(pos, w)) dfs(pos + 1, last_h, last_r, chunks);
  }

  uint64_t hyp_suffix_at(size_t pos, const Token& w) const {
    uint64_t n = 0;
    for (size_t p = pos; p < hyp->size(); ++p)
      if ((*hyp)[p] == w) ++n;
    return n;
  }
};

}  // namespace detail

// Exact-match stage of METEOR: matches are per-type min counts, chunks are
// minimized over all maximal one-to-one alignments.
inline MeteorStats meteor_stats(const std::vector<Token>& hyp, const std::vector<Token>& ref) {
  MeteorStats stats;
  stats.hyp_len = hyp.size();
  stats.ref_len = ref.size();
  std::map<Token, uint64_t> hyp_counts, ref_counts;
  for (const Token& w : hyp) hyp_counts[w] += 1;
  for (const Token& w : ref) ref_counts[w] += 1;
  for (const auto& [w, c] : hyp_counts) {
    auto it = ref_counts.find(w);
    if (it != ref_counts.end()) stats.matches += std::min(c, it->second);
  }
  if (stats.matches == 0) return stats;

  detail::ChunkSearch search;
  search.hyp = &hyp;
  search.ref = &ref;
  for (const auto& [w, c] : hyp_counts) {
    auto it = ref_counts.find(w);
    if (it != ref_counts.end()) search.needed[w] = std::min(c, it->second);
  }
  search.ref_used.assign(ref.size(), false);
  search.dfs(0, -2, -2, 0);
  stats.chunks = search.best;
  return stats;
}

// F-mean 10PR/(R+9P) discounted by 0.5 * (chunks/matches)^3.
inline double meteor_from_stats(const MeteorStats& stats) {
  if (stats.matches == 0) return 0.0;
  double m = static_cast<double>(stats.matches);
  double precision = m / static_cast<double>(stats.hyp_len);
  double recall = m / static_cast<double>(stats.ref_len);
  double fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
  double frag = static_cast<double>(stats.chunks) / m;
  double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

inline double meteor_exact(const std::vector<Token>& hyp, const std::vector<Token>& ref) {
  return meteor_from_stats(meteor_stats(hyp, ref));
}

inline double corpus_meteor(const std::vector<std::vector<Token>>& hyps,
                            const std::vector<std::vector<Token>>& refs) {
  if (hyps.size() != refs.size())
    throw Error("hypothesis/reference count mismatch " + std::to_string(hyps.size()) + " vs " +
                std::to_string(refs.size()));
  if (hyps.empty()) throw Error("empty evaluation set");
  MeteorStats total;
  for (size_t s = 0; s < hyps.size(); ++s) {
    MeteorStats one = meteor_stats(hyps[s], refs[s]);
    total.matches += one.matches;
    total.hyp_len += one.hyp_len;
    total.ref_len += one.ref_len;
    total.chunks += one.chunks;
  }
  return meteor_from_stats(total);
}

struct EvaluationReport {
  std::string label;
  double bleu = 0.0;
  double ter = 0.0;
  double meteor = 0.0;  // exact-match variant, reported as "meteor-exact"
  uint64_t sentences = 0;
};

// Adequacy/fluency sheet: one 1..5 score per dimension per sentence.
struct SubjectiveRow {
  uint64_t id = 0;
  uint32_t adequacy = 0;
  uint32_t fluency = 0;
};

struct SubjectiveSheet {
  std::vector<SubjectiveRow> rows;
};

inline SubjectiveSheet parse_subjective_csv(const std::string& text, const std::string& what) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw Error("empty subjective sheet: " + what);
  if (split(lines[0], ',') != std::vector<std::string>{"id", "adequacy", "fluency"})
    throw Error("expected header id,adequacy,fluency in " + what);
  SubjectiveSheet sheet;
  std::map<uint64_t, bool> seen;
  for (size_t n = 1; n < lines.size(); ++n) {
    std::string where = "line " + std::to_string(n + 1) + " of " + what;
    std::vector<std::string> fields = split(lines[n], ',');
    if (fields.size() != 3) throw Error("expected 3 fields, " + where);
    SubjectiveRow row;
    row.id = parse_uint(fields[0], where);
    row.adequacy = static_cast<uint32_t>(parse_uint(fields[1], where));
    row.fluency = static_cast<uint32_t>(parse_uint(fields[2], where));
    if (row.adequacy < 1 || row.adequacy > 5 || row.fluency < 1 || row.fluency > 5)
      throw Error("score out of range 1..5 for row id " + std::to_string(row.id) + ", " + where);
    if (seen[row.id]) throw Error("duplicate row id " + std::to_string(row.id) + ", " + where);
    seen[row.id] = true;
    sheet.rows.push_back(row);
  }
  if (sheet.rows.empty()) throw Error("subjective sheet has no rows: " + what);
  return sheet;
}

struct SubjectiveScores {
  double adequacy_pct = 0.0;
  double fluency_pct = 0.0;
};

// 100 * (S5 + 0.8*S4 + 0.6*S3) / N per dimension; scores below 3 contribute
// nothing.
inline SubjectiveScores subjective_score(const SubjectiveSheet& sheet) {
  if (sheet.rows.empty()) throw Error("subjective sheet has no rows");
  double n = static_cast<double>(sheet.rows.size());
  double a5 = 0, a4 = 0, a3 = 0, f5 = 0, f4 = 0, f3 = 0;
  for (const SubjectiveRow& row : sheet.rows) {
    if (row.adequacy < 1 || row.adequacy > 5 || row.fluency < 1 || row.fluency > 5)
      throw Error("score out of range 1..5 for row id " + std::to_string(row.id));
    if (row.adequacy == 5) a5 += 1;
    if (row.adequacy == 4) a4 += 1;
    if (row.adequacy == 3) a3 += 1;
    if (row.fluency == 5) f5 += 1;
    if (row.fluency == 4) f4 += 1;
    if (row.fluency == 3) f3 += 1;
  }
  SubjectiveScores scores;
  scores.adequacy_pct = 100.0 * (a5 + 0.8 * a4 + 0.6 * a3) / n;
  scores.fluency_pct = 100.0 * (f5 + 0.8 * f4 + 0.6 * f3) / n;
  return scores;
}

}  // namespace smtkit
