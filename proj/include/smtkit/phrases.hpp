// smtkit/phrases.hpp
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
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smtkit/alignment.hpp"
#include "smtkit/corpus.hpp"
#include "smtkit/model1.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

struct PhrasePair {
  std::vector<Token> source;
  std::vector<Token> target;
  uint64_t count = 1;
  // Word links relative to the phrase (source offset, target offset); kept
  // for lexical weighting.
  std::vector<std::pair<uint32_t, uint32_t>> links;
};

// Consistent-box extraction, tight variant: both source boundary words must
// be aligned, the target span is the exact projection of the source span,
// and no link may leave the box.
inline std::vector<PhrasePair> extract_phrases(const SentencePair& pair,
                                               const AlignmentLinkSet& alignment,
                                               uint32_t max_phrase_len) {
  if (max_phrase_len == 0) throw Error("max_phrase_len must be positive");
  if (alignment.pair_id != pair.id)
    throw Error("extract_phrases: pair id mismatch " + std::to_string(pair.id) + " vs " +
                std::to_string(alignment.pair_id));
  uint32_t slen = static_cast<uint32_t>(pair.source.size());
  uint32_t tlen = static_cast<uint32_t>(pair.target.size());
  for (const auto& [i, j] : alignment.links)
    if (i >= slen || j >= tlen)
      throw Error("extract_phrases: link out of range in pair " + std::to_string(pair.id));

  std::vector<bool> src_aligned(slen, false);
  for (const auto& [i, j] : alignment.links) src_aligned[i] = true;

  std::vector<PhrasePair> out;
  for (uint32_t i1 = 0; i1 < slen; ++i1) {
    if (!src_aligned[i1]) continue;
    for (uint32_t i2 = i1; i2 < slen && i2 - i1 + 1 <= max_phrase_len; ++i2) {
      if (!src_aligned[i2]) continue;
      uint32_t j1 = tlen, j2 = 0;
      bool any = false;
      for (const auto& [i, j] : alignment.links) {
        if (i < i1 || i > i2) continue;
        any = true;
        j1 = std::min(j1, j);
        j2 = std::max(j2, j);
      }
      if (!any) continue;
      if (j2 - j1 + 1 > max_phrase_len) continue;
      bool consistent = true;
      for (const auto& [i, j] : alignment.links) {
        if (j >= j1 && j <= j2 && (i < i1 || i > i2)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      PhrasePair pp;
      pp.source.assign(pair.source.begin() + i1, pair.source.begin() + i2 + 1);
      pp.target.assign(pair.target.begin() + j1, pair.target.begin() + j2 + 1);
      for (const auto& [i, j] : alignment.links)
        if (i >= i1 && i <= i2) pp.links.emplace_back(i - i1, j - j1);
      out.push_back(std::move(pp));
    }
  }
  return out;
}

struct PhraseFeatures {
  double phrase_fwd = 0.0;  // p(target | source), relative frequency
  double phrase_rev = 0.0;  // p(source | target)
  double lex_fwd = 0.0;     // lexical weight, forward
  double lex_rev = 0.0;     // lexical weight, reverse
};

struct PhraseOption {
  std::vector<Token> target;
  PhraseFeatures features;
};

class PhraseTable {
 public:
  void add(const std::vector<Token>& source, PhraseOption option) {
    std::string key = join(source, " ");
    auto [it, fresh] = index_.try_emplace(key, entries_.size());
    if (fresh) entries_.push_back({source, {}});
    entries_[it->second].options.push_back(std::move(option));
    max_source_len_ = std::max(max_source_len_, source.size());
  }

  const std::vector<PhraseOption>* lookup(const std::vector<Token>& source) const {
    auto it = index_.find(join(source, " "));
    if (it == index_.end()) return nullptr;
    return &entries_[it->second].options;
  }
  bool has_source(const std::vector<Token>& source) const { return lookup(source) != nullptr; }
  size_t max_source_len() const { return max_source_len_; }
  size_t source_count() const { return entries_.size(); }
  size_t option_count() const {
    size_t n = 0;
    for (const auto& e : entries_) n += e.options.size();
    return n;
  }

  void sort_options() {
    for (auto& e : entries_)
      std::sort(e.options.begin(), e.options.end(), [](const PhraseOption& a, const PhraseOption& b) {
        return a.target < b.target;
      });
  }

  // source ||| target ||| p(t|s) p(s|t) lex(t|s) lex(s|t), six significant
  // digits, sorted by source then target bytes.
  std::string to_text() const {
    std::vector<std::pair<std::string, std::string>> lines;
    for (const auto& e : entries_) {
      std::string src = join(e.source, " ");
      for (const PhraseOption& o : e.options) {
        std::string line = src + " ||| " + join(o.target, " ") + " ||| " +
                           format_sig(o.features.phrase_fwd, 6) + " " +
                           format_sig(o.features.phrase_rev, 6) + " " +
                           format_sig(o.features.lex_fwd, 6) + " " +
                           format_sig(o.features.lex_rev, 6);
        lines.push_back({src + "\x1f" + join(o.target, " "), std::move(line)});
      }
    }
    std::sort(lines.begin(), lines.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (const auto& [key, line] : lines) {
      out += line;
      out += '\n';
    }
    return out;
  }

  static PhraseTable from_text(const std::string& text, const std::string& what) {
    PhraseTable table;
    std::vector<std::string> lines = split_lines(text);
    for (size_t n = 0; n < lines.size(); ++n) {
      std::string where = "line " + std::to_string(n + 1) + " of " + what;
      std::vector<std::string> parts = split_on(lines[n], " ||| ");
      if (parts.size() != 3) throw Error("expected 3 ||| fields, " + where);
      if (parts[0].empty() || parts[1].empty()) throw Error("empty phrase, " + where);
      std::vector<std::string> src = split(parts[0], ' ');
      std::vector<std::string> tgt = split(parts[1], ' ');
      std::vector<std::string> feats = split(parts[2], ' ');
      if (feats.size() != 4) throw Error("expected 4 features, " + where);
      PhraseOption o;
      o.target = std::move(tgt);
      o.features.phrase_fwd = parse_double(feats[0], where);
      o.features.phrase_rev = parse_double(feats[1], where);
      o.features.lex_fwd = parse_double(feats[2], where);
      o.features.lex_rev = parse_double(feats[3], where);
      table.add(src, std::move(o));
    }
    return table;
  }

 private:
  struct Entry {
    std::vector<Token> source;
    std::vector<PhraseOption> options;
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
  size_t max_source_len_ = 0;
};

namespace detail {

// Lexical weight of a phrase pair under t(row | column): for every row-side
// word take the best probability over its linked column-side words (or NULL
// when unlinked) and multiply.
inline double lexical_weight(const std::vector<Token>& row_words,
                             const std::vector<Token>& col_words,
                             const std::vector<std::pair<uint32_t, uint32_t>>& row_to_col,
                             const TranslationTable& table) {
  double weight = 1.0;
  for (uint32_t r = 0; r < row_words.size(); ++r) {
    double best = 0.0;
    bool linked = false;
    for (const auto& [rr, cc] : row_to_col) {
      if (rr != r) continue;
      linked = true;
      best = std::max(best, table.prob(col_words[cc], row_words[r]));
    }
    if (!linked) best = table.null_prob(row_words[r]);
    weight *= std::max(best, table.floor_prob());
  }
  return weight;
}

}  // namespace detail

// Aggregates extracted phrase pair instances and scores them.  forward is
// t(target | source), reverse is t(source | target).  Each surface pair keeps
// its most frequent internal link set (ties: lexicographically smallest
// serialized form) for the lexical weights.
inline PhraseTable score_phrase_table(const std::vector<PhrasePair>& instances,
                                      const TranslationTable& forward,
                                      const TranslationTable& reverse) {
  struct Agg {
    std::vector<Token> source, target;
    uint64_t count = 0;
    std::map<std::string, std::pair<uint64_t, std::vector<std::pair<uint32_t, uint32_t>>>> link_votes;
  };
  std::map<std::pair<std::string, std::string>, Agg> by_pair;
  std::map<std::string, uint64_t> source_totals, target_totals;

  for (const PhrasePair& pp : instances) {
    std::string src = join(pp.source, " ");
    std::string tgt = join(pp.target, " ");
    Agg& agg = by_pair[{src, tgt}];
    if (agg.count == 0) {
      agg.source = pp.source;
      agg.target = pp.target;
    }
    agg.count += pp.count;
    std::vector<std::pair<uint32_t, uint32_t>> links = pp.links;
    std::sort(links.begin(), links.end());
    std::string sig;
    for (const auto& [i, j] : links)
      sig += std::to_string(i) + "-" + std::to_string(j) + " ";
    auto& vote = agg.link_votes[sig];
    vote.first += pp.count;
    if (vote.second.empty()) vote.second = links;
    source_totals[src] += pp.count;
    target_totals[tgt] += pp.count;
  }

  PhraseTable table;
  for (const auto& [key, agg] : by_pair) {
    uint64_t best_votes = 0;
    const std::vector<std::pair<uint32_t, uint32_t>>* best_links = nullptr;
    for (const auto& [sig, vote] : agg.link_votes) {
      if (vote.first > best_votes) {  // map order already favors smaller sig on ties
        best_votes = vote.first;
        best_links = &vote.second;
      }
    }
    std::vector<std::pair<uint32_t, uint32_t>> links = *best_links;
    std::vector<std::pair<uint32_t, uint32_t>> tlinks;  // (target offset, source offset)
    for (const auto& [i, j] : links) tlinks.emplace_back(j, i);

    PhraseOption o;
    o.target = agg.target;
    o.features.phrase_fwd =
        static_cast<double>(agg.count) / static_cast<double>(source_totals[key.first]);
    o.features.phrase_rev =
        static_cast<double>(agg.count) / static_cast<double>(target_totals[key.second]);
    o.features.lex_fwd = detail::lexical_weight(agg.target, agg.source, tlinks, forward);
    o.features.lex_rev = detail::lexical_weight(agg.source, agg.target, links, reverse);
    table.add(agg.source, std::move(o));
  }
  table.sort_options();
  return table;
}

}  // namespace smtkit
