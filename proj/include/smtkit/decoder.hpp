// smtkit/decoder.hpp
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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smtkit/ngram_lm.hpp"
#include "smtkit/phrases.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// All four features of a copied-through out-of-vocabulary word.
inline constexpr double kOovFeature = 1e-12;

struct ModelWeights {
  double phrase_fwd = 1.0;
  double phrase_rev = 1.0;
  double lex_fwd = 1.0;
  double lex_rev = 1.0;
  double lm = 1.0;
  double word_penalty = 0.0;
  double distortion = 0.5;

  static constexpr size_t kFieldCount = 7;
  static const char* field_name(size_t k) {
    static const char* names[kFieldCount] = {"phrase_fwd", "phrase_rev", "lex_fwd", "lex_rev",
                                             "lm",         "word_penalty", "distortion"};
    return names[k];
  }
  double& field(size_t k) {
    double* fields[kFieldCount] = {&phrase_fwd, &phrase_rev, &lex_fwd, &lex_rev,
                                   &lm,         &word_penalty, &distortion};
    return *fields[k];
  }
  double field(size_t k) const { return const_cast<ModelWeights*>(this)->field(k); }

  std::string to_tsv() const {
    std::string out;
    for (size_t k = 0; k < kFieldCount; ++k)
      out += std::string(field_name(k)) + "\t" + format_sig(field(k), 17) + "\n";
    return out;
  }
  static ModelWeights from_tsv(const std::string& text, const std::string& what) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.size() != kFieldCount)
      throw Error("expected " + std::to_string(kFieldCount) + " weight lines in " + what);
    ModelWeights w;
    for (size_t k = 0; k < kFieldCount; ++k) {
      std::vector<std::string> parts = split(lines[k], '\t');
      if (parts.size() != 2 || parts[0] != field_name(k))
        throw Error("expected weight " + std::string(field_name(k)) + ", line " +
                    std::to_string(k + 1) + " of " + what);
      w.field(k) = parse_double(parts[1], "line " + std::to_string(k + 1) + " of " + what);
    }
    return w;
  }
};

struct DecoderConfig {
  size_t beam_size = 100;
  int distortion_limit = 6;      // negative = unlimited
  double max_length_ratio = 3.0;  // target tokens per source token; <= 0 = uncapped
};

struct DerivationStep {
  uint32_t src_begin = 0;
  uint32_t src_end = 0;  // exclusive
  std::vector<Token> target;
  PhraseFeatures features;
  bool oov = false;
  double lm_log10 = 0.0;  // this step's target words under the model
  uint32_t jump = 0;      // |src_begin - previous end|
};

struct TranslationResult {
  std::vector<Token> tokens;
  double score = 0.0;  // natural-log model score including the end event
  std::vector<DerivationStep> steps;
  uint32_t oov_count = 0;
};

namespace detail {

struct Hypothesis {
  std::vector<uint64_t> coverage;
  std::vector<Token> target;
  NGramModel::State lm_state;
  int32_t last_end = 0;  // one past the previous phrase, 0 initially
  double score = 0.0;
  std::vector<DerivationStep> steps;
  uint32_t oov = 0;
};

inline bool hyp_better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.target != b.target) return joined_less(a.target, b.target);
  if (a.coverage != b.coverage) return a.coverage < b.coverage;
  return a.last_end < b.last_end;
}

inline std::string recombination_key(const Hypothesis& h) {
  std::string key;
  key.reserve(h.coverage.size() * 8 + h.lm_state.size() * 4 + 4);
  for (uint64_t w : h.coverage) key.append(reinterpret_cast<const char*>(&w), 8);
  for (uint32_t s : h.lm_state) key.append(reinterpret_cast<const char*>(&s), 4);
  key.append(reinterpret_cast<const char*>(&h.last_end), 4);
  return key;
}

struct SpanOption {
  uint32_t begin = 0, end = 0;
  const PhraseOption* phrase = nullptr;  // null for the OOV copy option
  std::vector<Token> oov_target;
};

}  // namespace detail

// Log-linear stack decoder.  Hypotheses grow by covering one untranslated
// source span per step; stacks are indexed by covered word count, pruned to
// the beam, and hypotheses agreeing on coverage, language model state and
// last position are recombined.  If the distortion limit (and then the length
// cap) leaves no complete hypothesis, decoding retries without them.
inline TranslationResult translate(const std::vector<Token>& source, const PhraseTable& table,
                                   const NGramModel& lm, const ModelWeights& weights,
                                   const DecoderConfig& config = {}) {
  if (config.beam_size == 0) throw Error("beam size must be positive");
  const size_t n = source.size();
  const double ln10 = std::log(10.0);
  if (n == 0) {
    TranslationResult empty;
    empty.score = weights.lm * ln10 * lm.end_log10(lm.begin_state());
    return empty;
  }

  // Translation options per span, plus a copy-through option for source
  // words with no single-word entry.
  std::vector<detail::SpanOption> options;
  size_t max_len = std::min(n, table.max_source_len());
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t len = 1; len <= max_len && i + len <= n; ++len) {
      std::vector<Token> span(source.begin() + i, source.begin() + i + len);
      const std::vector<PhraseOption>* opts = table.lookup(span);
      if (opts) {
        for (const PhraseOption& o : *opts) {
          detail::SpanOption so;
          so.begin = i;
          so.end = i + len;
          so.phrase = &o;
          options.push_back(std::move(so));
        }
      }
      if (len == 1 && !opts) {
        detail::SpanOption so;
        so.begin = i;
        so.end = i + 1;
        so.oov_target = {source[i]};
        options.push_back(std::move(so));
      }
    }
  }

  auto run = [&](int distortion_limit, double ratio) -> std::vector<detail::Hypothesis> {
    std::vector<std::unordered_map<std::string, detail::Hypothesis>> stacks(n + 1);
    detail::Hypothesis init;
    init.coverage.assign((n + 63) / 64, 0);
    init.lm_state = lm.begin_state();
    stacks[0].emplace(detail::recombination_key(init), init);

    for (size_t k = 0; k < n; ++k) {
      std::vector<detail::Hypothesis> beam;
      beam.reserve(stacks[k].size());
      for (auto& [key, hyp] : stacks[k]) beam.push_back(std::move(hyp));
      std::sort(beam.begin(), beam.end(), detail::hyp_better);
      if (beam.size() > config.beam_size) beam.resize(config.beam_size);

      for (const detail::Hypothesis& hyp : beam) {
        for (const detail::SpanOption& so : options) {
          bool free = true;
          for (uint32_t p = so.begin; p < so.end; ++p)
            if (hyp.coverage[p / 64] >> (p % 64) & 1) {
              free = false;
              break;
            }
          if (!free) continue;
          int64_t delta = static_cast<int64_t>(so.begin) - hyp.last_end;
          uint32_t jump = static_cast<uint32_t>(delta < 0 ? -delta : delta);
          if (distortion_limit >= 0 && jump > static_cast<uint32_t>(distortion_limit)) continue;
          const std::vector<Token>& tgt = so.phrase ? so.phrase->target : so.oov_target;
          if (ratio > 0.0 &&
              static_cast<double>(hyp.target.size() + tgt.size()) > ratio * static_cast<double>(n))
            continue;

          detail::Hypothesis next = hyp;
          DerivationStep step;
          step.src_begin = so.begin;
          step.src_end = so.end;
          step.target = tgt;
          step.jump = jump;
          if (so.phrase) {
            step.features = so.phrase->features;
          } else {
            step.features = {kOovFeature, kOovFeature, kOovFeature, kOovFeature};
            step.oov = true;
            next.oov += 1;
          }
          for (const Token& w : tgt) {
            auto [lp, state] = lm.advance(next.lm_state, w);
            step.lm_log10 += lp;
            next.lm_state = std::move(state);
            next.target.push_back(w);
          }
          next.score += weights.phrase_fwd * std::log(step.features.phrase_fwd) +
                        weights.phrase_rev * std::log(step.features.phrase_rev) +
                        weights.lex_fwd * std::log(step.features.lex_fwd) +
                        weights.lex_rev * std::log(step.features.lex_rev) +
                        weights.lm * ln10 * step.lm_log10 -
                        weights.word_penalty * static_cast<double>(tgt.size()) -
                        weights.distortion * static_cast<double>(jump);
          for (uint32_t p = so.begin; p < so.end; ++p) next.coverage[p / 64] |= uint64_t{1} << (p % 64);
          next.last_end = static_cast<int32_t>(so.end);
          next.steps.push_back(std::move(step));

          size_t covered = k + (so.end - so.begin);
          if (covered == n) next.score += weights.lm * ln10 * lm.end_log10(next.lm_state);
          std::string key = detail::recombination_key(next);
          auto [it, fresh] = stacks[covered].try_emplace(key, next);
          if (!fresh && detail::hyp_better(next, it->second)) it->second = std::move(next);
        }
      }
    }
    std::vector<detail::Hypothesis> finals;
    for (auto& [key, hyp] : stacks[n]) finals.push_back(std::move(hyp));
    std::sort(finals.begin(), finals.end(), detail::hyp_better);
    return finals;
  };

  std::vector<detail::Hypothesis> finals = run(config.distortion_limit, config.max_length_ratio);
  if (finals.empty() && config.distortion_limit >= 0)
    finals = run(-1, config.max_length_ratio);
  if (finals.empty() && config.max_length_ratio > 0.0) finals = run(-1, 0.0);
  if (finals.empty()) throw Error("decoder produced no complete hypothesis");

  const detail::Hypothesis& best = finals.front();
  TranslationResult result;
  result.tokens = best.target;
  result.score = best.score;
  result.steps = best.steps;
  result.oov_count = best.oov;
  return result;
}

// Decodes each line independently; output order matches input order.
inline std::vector<TranslationResult> translate_corpus(
    const std::vector<std::vector<Token>>& sources, const PhraseTable& table, const NGramModel& lm,
    const ModelWeights& weights, const DecoderConfig& config = {}, unsigned threads = 1) {
  std::vector<TranslationResult> results(sources.size());
  if (threads <= 1 || sources.size() <= 1) {
    for (size_t k = 0; k < sources.size(); ++k)
      results[k] = translate(sources[k], table, lm, weights, config);
    return results;
  }
  std::atomic<size_t> cursor{0};
  std::vector<std::thread> pool;
  std::vector<std::string> errors(sources.size());
  unsigned workers = std::min<size_t>(threads, sources.size());
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        size_t k = cursor.fetch_add(1);
        if (k >= sources.size()) return;
        try {
          results[k] = translate(sources[k], table, lm, weights, config);
        } catch (const std::exception& e) {
          errors[k] = e.what();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (size_t k = 0; k < sources.size(); ++k)
    if (!errors[k].empty())
      throw Error("sentence " + std::to_string(k + 1) + ": " + errors[k]);
  return results;
}

}  // namespace smtkit
