// smtkit/model1.hpp
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
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "smtkit/alignment.hpp"
#include "smtkit/corpus.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// Word translation probabilities t(target | source).  Source id 0 is the
// empty (NULL) word, which conditions every target word.  Rows only store
// co-occurring targets; everything else falls back to the floor.
class TranslationTable {
 public:
  static constexpr const char* kNull = "<NULL>";

  TranslationTable() { intern_source(kNull); }

  double floor_prob() const { return floor_; }
  void set_floor(double f) { floor_ = f; }

  uint32_t intern_source(const std::string& w) {
    auto it = source_index_.find(w);
    if (it != source_index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(source_vocab_.size());
    source_vocab_.push_back(w);
    source_index_.emplace(w, id);
    rows_.emplace_back();
    return id;
  }
  uint32_t intern_target(const std::string& w) {
    auto it = target_index_.find(w);
    if (it != target_index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(target_vocab_.size());
    target_vocab_.push_back(w);
    target_index_.emplace(w, id);
    return id;
  }

  // -1 when absent.
  int64_t source_id(const std::string& w) const {
    auto it = source_index_.find(w);
    return it == source_index_.end() ? -1 : static_cast<int64_t>(it->second);
  }
  int64_t target_id(const std::string& w) const {
    auto it = target_index_.find(w);
    return it == target_index_.end() ? -1 : static_cast<int64_t>(it->second);
  }

  size_t source_count() const { return source_vocab_.size(); }
  size_t target_count() const { return target_vocab_.size(); }

  double prob_ids(uint32_t s, uint32_t t) const {
    const Row& row = rows_[s];
    auto it = std::lower_bound(row.targets.begin(), row.targets.end(), t);
    if (it == row.targets.end() || *it != t) return floor_;
    return row.probs[static_cast<size_t>(it - row.targets.begin())];
  }

  double prob(const std::string& source, const std::string& target) const {
    int64_t s = source_id(source), t = target_id(target);
    if (s < 0 || t < 0) return floor_;
    return prob_ids(static_cast<uint32_t>(s), static_cast<uint32_t>(t));
  }
  double null_prob(const std::string& target) const { return prob(kNull, target); }

  // Replaces a whole row; target ids must be strictly increasing.
  void set_row(uint32_t s, std::vector<uint32_t> targets, std::vector<double> probs) {
    rows_[s].targets = std::move(targets);
    rows_[s].probs = std::move(probs);
  }

  // max |sum_t t(t|s) - 1| across sources with a non-empty row.
  double max_normalization_error() const {
    double worst = 0.0;
    for (const Row& row : rows_) {
      if (row.targets.empty()) continue;
      double sum = 0.0;
      for (double p : row.probs) sum += p;
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
    return worst;
  }

  void for_each(const std::function<void(const std::string&, const std::string&, double)>& fn) const {
    for (uint32_t s = 0; s < rows_.size(); ++s)
      for (size_t k = 0; k < rows_[s].targets.size(); ++k)
        fn(source_vocab_[s], target_vocab_[rows_[s].targets[k]], rows_[s].probs[k]);
  }

  // source <TAB> target <TAB> probability, sorted by source bytes then target
  // bytes.  NULL is spelled "<NULL>".  17 significant digits round-trip.
  std::string to_tsv() const {
    std::vector<std::pair<std::pair<std::string, std::string>, double>> flat;
    for_each([&](const std::string& s, const std::string& t, double p) {
      flat.push_back({{s, t}, p});
    });
    std::sort(flat.begin(), flat.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (const auto& e : flat) {
      out += e.first.first;
      out += '\t';
      out += e.first.second;
      out += '\t';
      out += format_sig(e.second, 17);
      out += '\n';
    }
    return out;
  }

  static TranslationTable from_tsv(const std::string& text, const std::string& what) {
    TranslationTable table;
    std::map<uint32_t, std::pair<std::vector<uint32_t>, std::vector<double>>> rows;
    std::vector<std::string> lines = split_lines(text);
    for (size_t n = 0; n < lines.size(); ++n) {
      std::vector<std::string> fields = split(lines[n], '\t');
      if (fields.size() != 3)
        throw Error("expected 3 fields, line " + std::to_string(n + 1) + " of " + what);
      uint32_t s = table.intern_source(fields[0]);
      uint32_t t = table.intern_target(fields[1]);
      double p = parse_double(fields[2], "line " + std::to_string(n + 1) + " of " + what);
      auto& row = rows[s];
      row.first.push_back(t);
      row.second.push_back(p);
    }
    for (auto& [s, row] : rows) {
      std::vector<size_t> order(row.first.size());
      for (size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::sort(order.begin(), order.end(),
                [&](size_t a, size_t b) { return row.first[a] < row.first[b]; });
      std::vector<uint32_t> ts;
      std::vector<double> ps;
      for (size_t k : order) {
        ts.push_back(row.first[k]);
        ps.push_back(row.second[k]);
      }
      table.set_row(s, std::move(ts), std::move(ps));
    }
    return table;
  }

 private:
  struct Row {
    std::vector<uint32_t> targets;  // sorted
    std::vector<double> probs;
  };
  std::vector<std::string> source_vocab_;
  std::vector<std::string> target_vocab_;
  std::unordered_map<std::string, uint32_t> source_index_;
  std::unordered_map<std::string, uint32_t> target_index_;
  std::vector<Row> rows_;
  double floor_ = 1e-12;
};

struct EMConfig {
  uint32_t iterations = 10;
  double epsilon = 1e-4;  // stop when log-likelihood gains less than this
  double floor = 1e-12;
};

struct EMResult {
  TranslationTable table;
  std::vector<double> log_likelihood;  // one entry per E-step actually run
};

// IBM Model 1 expectation-maximization.  The observer (may be null) sees the
// table after every M-step, before the stopping test.
inline EMResult train_model1(
    const ParallelCorpus& corpus, const EMConfig& config = {},
    const std::function<void(uint32_t, const TranslationTable&)>& observer = nullptr) {
  if (corpus.pairs.empty()) throw Error("model 1 training needs a non-empty corpus");
  EMResult result;
  TranslationTable& table = result.table;
  table.set_floor(config.floor);

  // Pre-intern and build per-source co-occurring target sets.
  struct IdPair {
    std::vector<uint32_t> src;  // without NULL; NULL (=0) is implicit
    std::vector<uint32_t> tgt;
  };
  std::vector<IdPair> data;
  data.reserve(corpus.pairs.size());
  for (const SentencePair& pair : corpus.pairs) {
    if (pair.source.empty() || pair.target.empty())
      throw Error("model 1 training: empty side in pair " + std::to_string(pair.id));
    IdPair ids;
    for (const Token& w : pair.source) ids.src.push_back(table.intern_source(w));
    for (const Token& w : pair.target) ids.tgt.push_back(table.intern_target(w));
    data.push_back(std::move(ids));
  }

  size_t n_src = table.source_count();
  std::vector<std::vector<uint32_t>> cooc(n_src);
  {
    std::vector<std::vector<bool>> seen(n_src);
    for (auto& row : seen) row.assign(table.target_count(), false);
    for (const IdPair& ids : data) {
      for (uint32_t t : ids.tgt) {
        if (!seen[0][t]) {
          seen[0][t] = true;
          cooc[0].push_back(t);
        }
        for (uint32_t s : ids.src) {
          if (!seen[s][t]) {
            seen[s][t] = true;
            cooc[s].push_back(t);
          }
        }
      }
    }
  }
  for (uint32_t s = 0; s < n_src; ++s) {
    std::sort(cooc[s].begin(), cooc[s].end());
    std::vector<double> probs(cooc[s].size(), cooc[s].empty() ? 0.0 : 1.0 / cooc[s].size());
    table.set_row(s, std::vector<uint32_t>(cooc[s]), std::move(probs));
  }

  // Dense per-target scratch keyed by target id, so the E-step inner loop is
  // a couple of array lookups.
  std::vector<std::vector<double>> counts(n_src);
  for (uint32_t s = 0; s < n_src; ++s) counts[s].assign(cooc[s].size(), 0.0);
  std::vector<std::vector<uint32_t>> slot(n_src);
  for (uint32_t s = 0; s < n_src; ++s) {
    slot[s].assign(table.target_count(), 0);
    for (uint32_t k = 0; k < cooc[s].size(); ++k) slot[s][cooc[s][k]] = k;
  }
  std::vector<std::vector<double>> probs(n_src);
  for (uint32_t s = 0; s < n_src; ++s)
    probs[s].assign(cooc[s].size(), cooc[s].empty() ? 0.0 : 1.0 / cooc[s].size());

  for (uint32_t iter = 0; iter < config.iterations; ++iter) {
    for (auto& row : counts) std::fill(row.begin(), row.end(), 0.0);
    double ll = 0.0;
    for (const IdPair& ids : data) {
      double log_src = std::log(static_cast<double>(ids.src.size()) + 1.0);
      for (uint32_t t : ids.tgt) {
        double denom = probs[0][slot[0][t]];
        for (uint32_t s : ids.src) denom += probs[s][slot[s][t]];
        ll += std::log(denom) - log_src;
        double inv = 1.0 / denom;
        counts[0][slot[0][t]] += probs[0][slot[0][t]] * inv;
        for (uint32_t s : ids.src) counts[s][slot[s][t]] += probs[s][slot[s][t]] * inv;
      }
    }
    result.log_likelihood.push_back(ll);

    for (uint32_t s = 0; s < n_src; ++s) {
      double total = 0.0;
      for (double c : counts[s]) total += c;
      if (total <= 0.0) continue;
      double floored_sum = 0.0;
      for (size_t k = 0; k < counts[s].size(); ++k) {
        probs[s][k] = std::max(counts[s][k] / total, config.floor);
        floored_sum += probs[s][k];
      }
      for (double& p : probs[s]) p /= floored_sum;
      table.set_row(s, std::vector<uint32_t>(cooc[s]), std::vector<double>(probs[s]));
    }
    if (observer) observer(iter, table);
    size_t n = result.log_likelihood.size();
    if (n >= 2 && result.log_likelihood[n - 1] - result.log_likelihood[n - 2] < config.epsilon)
      break;
  }
  return result;
}

// Best single source link per target word (or NULL).  NULL wins ties, then
// the smallest source index; a link beats the incumbent only when strictly
// more probable.
inline AlignmentLinkSet viterbi_align(const TranslationTable& table, const SentencePair& pair) {
  AlignmentLinkSet out;
  out.pair_id = pair.id;
  for (uint32_t j = 0; j < pair.target.size(); ++j) {
    double best = table.null_prob(pair.target[j]);
    int64_t best_i = -1;
    for (uint32_t i = 0; i < pair.source.size(); ++i) {
      double p = table.prob(pair.source[i], pair.target[j]);
      if (p > best) {
        best = p;
        best_i = i;
      }
    }
    if (best_i >= 0) out.links.emplace(static_cast<uint32_t>(best_i), j);
  }
  return out;
}

}  // namespace smtkit
