// smtkit/ngram_lm.hpp
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
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "smtkit/corpus.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// Interpolated add-alpha n-gram model over sentences.  Every predicted event
// (each word plus one </s> per sentence) is counted at all levels 1..order,
// so each level's continuation counts sum to that history's total and every
// conditional distribution over the event vocabulary sums to one.  The
// recursion bottoms out in a uniform distribution over the event vocabulary
// (observed words, </s>, <unk>).
class NGramModel {
 public:
  static constexpr uint32_t kBos = 0, kEos = 1, kUnk = 2;
  using State = std::vector<uint32_t>;  // last order-1 word ids

  NGramModel() : NGramModel(3, 0.1) {}
  NGramModel(uint32_t order, double alpha) : order_(order), alpha_(alpha) {
    if (order_ == 0) throw Error("language model order must be positive");
    if (alpha_ <= 0.0) throw Error("language model alpha must be positive");
    intern("<s>");
    intern("</s>");
    intern("<unk>");
    counts_.resize(order_ + 1);
    history_totals_.resize(order_ + 1);
  }

  static NGramModel train(const std::vector<std::vector<Token>>& sentences, uint32_t order = 3,
                          double alpha = 0.1) {
    if (sentences.empty()) throw Error("language model training needs a non-empty corpus");
    NGramModel lm(order, alpha);
    for (const std::vector<Token>& sentence : sentences) {
      std::vector<uint32_t> seq(lm.order_ - 1, kBos);
      for (const Token& w : sentence) seq.push_back(lm.intern(w));
      seq.push_back(kEos);
      for (size_t p = lm.order_ - 1; p < seq.size(); ++p) {
        for (uint32_t k = 1; k <= lm.order_; ++k) {
          const uint32_t* start = seq.data() + p + 1 - k;
          lm.counts_[k][key(start, k)] += 1;
          lm.history_totals_[k][key(start, k - 1)] += 1;
        }
      }
    }
    return lm;
  }

  uint32_t order() const { return order_; }
  double alpha() const { return alpha_; }
  // Observed words plus </s> plus <unk>; excludes <s>, which is never predicted.
  size_t event_count() const { return vocab_.size() - 1; }

  uint32_t word_id(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? kUnk : it->second;
  }

  State begin_state() const { return State(order_ - 1, kBos); }

  std::pair<double, State> advance(const State& state, const std::string& word) const {
    uint32_t w = word_id(word);
    double lp = std::log10(cond_prob_ids(state.data(), state.size(), w));
    State next = state;
    if (!next.empty()) {
      next.erase(next.begin());
      next.push_back(w);
    }
    return {lp, std::move(next)};
  }

  double end_log10(const State& state) const {
    return std::log10(cond_prob_ids(state.data(), state.size(), kEos));
  }

  // log10 probability of the whole sentence including the end event.
  double sentence_log10(const std::vector<Token>& tokens) const {
    State state = begin_state();
    double lp = 0.0;
    for (const Token& w : tokens) {
      auto [step, next] = advance(state, w);
      lp += step;
      state = std::move(next);
    }
    return lp + end_log10(state);
  }

  // Conditional probability with an explicit history (most recent word last);
  // history length must be order-1.
  double cond_prob(const std::vector<std::string>& history, const std::string& word) const {
    if (history.size() + 1 != order_)
      throw Error("history length must be " + std::to_string(order_ - 1));
    std::vector<uint32_t> h;
    for (const std::string& w : history) h.push_back(word_id(w));
    return cond_prob_ids(h.data(), h.size(), word_id(word));
  }

  uint64_t ngram_count(const std::vector<std::string>& ngram) const {
    if (ngram.empty() || ngram.size() > order_) return 0;
    std::vector<uint32_t> ids;
    for (const std::string& w : ngram) ids.push_back(word_id(w));
    auto it = counts_[ngram.size()].find(key(ids.data(), ids.size()));
    return it == counts_[ngram.size()].end() ? 0 : it->second;
  }

  // ngram tokens <TAB> count, levels ascending then byte order; preceded by
  // order and alpha lines.  from_tsv(to_tsv()) reproduces the dump exactly.
  std::string to_tsv() const {
    std::string out = "order\t" + std::to_string(order_) + "\n";
    out += "alpha\t" + format_sig(alpha_, 17) + "\n";
    for (uint32_t k = 1; k <= order_; ++k) {
      std::vector<std::pair<std::string, uint64_t>> lines;
      lines.reserve(counts_[k].size());
      for (const auto& [bytes, count] : counts_[k]) {
        const uint32_t* ids = reinterpret_cast<const uint32_t*>(bytes.data());
        std::vector<std::string> words;
        for (uint32_t p = 0; p < k; ++p) words.push_back(vocab_[ids[p]]);
        lines.push_back({join(words, " "), count});
      }
      std::sort(lines.begin(), lines.end());
      for (const auto& [gram, count] : lines)
        out += gram + "\t" + std::to_string(count) + "\n";
    }
    return out;
  }

  static NGramModel from_tsv(const std::string& text, const std::string& what) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.size() < 2) throw Error("truncated language model file: " + what);
    auto field = [&](size_t n, const std::string& name) {
      std::vector<std::string> parts = split(lines[n], '\t');
      if (parts.size() != 2 || parts[0] != name)
        throw Error("expected " + name + " line, line " + std::to_string(n + 1) + " of " + what);
      return parts[1];
    };
    uint32_t order =
        static_cast<uint32_t>(parse_uint(field(0, "order"), "line 1 of " + what));
    double alpha = parse_double(field(1, "alpha"), "line 2 of " + what);
    NGramModel lm(order, alpha);
    for (size_t n = 2; n < lines.size(); ++n) {
      std::string where = "line " + std::to_string(n + 1) + " of " + what;
      std::vector<std::string> parts = split(lines[n], '\t');
      if (parts.size() != 2) throw Error("expected ngram and count, " + where);
      std::vector<std::string> words = split(parts[0], ' ');
      if (words.empty() || words.size() > order) throw Error("bad ngram length, " + where);
      uint64_t count = parse_uint(parts[1], where);
      std::vector<uint32_t> ids;
      for (const std::string& w : words) ids.push_back(lm.intern(w));
      uint32_t k = static_cast<uint32_t>(ids.size());
      lm.counts_[k][key(ids.data(), k)] += count;
      lm.history_totals_[k][key(ids.data(), k - 1)] += count;
    }
    return lm;
  }

 private:
  static std::string key(const uint32_t* ids, size_t n) {
    std::string k(n * sizeof(uint32_t), '\0');
    if (n > 0) std::memcpy(k.data(), ids, n * sizeof(uint32_t));
    return k;
  }

  uint32_t intern(const std::string& w) {
    auto it = index_.find(w);
    if (it != index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(vocab_.size());
    vocab_.push_back(w);
    index_.emplace(w, id);
    return id;
  }

  double cond_prob_ids(const uint32_t* history, size_t hlen, uint32_t w) const {
    double lower;
    if (hlen == 0) {
      lower = 1.0 / static_cast<double>(event_count());
    } else {
      lower = cond_prob_ids(history + 1, hlen - 1, w);
    }
    uint32_t k = static_cast<uint32_t>(hlen) + 1;
    std::vector<uint32_t> gram(history, history + hlen);
    gram.push_back(w);
    uint64_t c = 0, total = 0;
    auto ci = counts_[k].find(key(gram.data(), k));
    if (ci != counts_[k].end()) c = ci->second;
    auto hi = history_totals_[k].find(key(history, hlen));
    if (hi != history_totals_[k].end()) total = hi->second;
    return (static_cast<double>(c) + alpha_ * lower) / (static_cast<double>(total) + alpha_);
  }

  uint32_t order_;
  double alpha_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, uint32_t> index_;
  // counts_[k]: k-gram id bytes -> count; history_totals_[k]: (k-1)-gram id
  // bytes -> sum of continuations.
  std::vector<std::unordered_map<std::string, uint64_t>> counts_;
  std::vector<std::unordered_map<std::string, uint64_t>> history_totals_;
};

}  // namespace smtkit
