// smtkit/tuner.hpp
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

#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "smtkit/decoder.hpp"
#include "smtkit/metrics.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

struct TunerParams {
  uint32_t max_passes = 5;
  uint32_t grid_points = 21;
  double grid_min = -1.0;
  double grid_max = 3.0;
  unsigned threads = 1;
};

struct TuneResult {
  ModelWeights weights;
  double initial_bleu = 0.0;
  double final_bleu = 0.0;
  uint32_t passes = 0;
};

// Grid coordinate ascent on corpus BLEU of the decoded dev set (smoothed
// BLEU as tie-breaker).  A weight only moves when the objective strictly
// improves, so the result never scores below the starting point.
inline TuneResult tune(const std::vector<std::vector<Token>>& dev_sources,
                       const std::vector<std::vector<Token>>& dev_refs, const PhraseTable& table,
                       const NGramModel& lm, const ModelWeights& initial,
                       const DecoderConfig& config = {}, const TunerParams& params = {}) {
  if (dev_sources.empty()) throw Error("tuning needs a non-empty dev set");
  if (dev_sources.size() != dev_refs.size())
    throw Error("dev source/reference count mismatch " + std::to_string(dev_sources.size()) +
                " vs " + std::to_string(dev_refs.size()));
  if (params.grid_points == 0) throw Error("tuner grid needs at least one point");

  std::map<std::string, std::pair<double, double>> memo;
  auto objective = [&](const ModelWeights& w) {
    std::string key(ModelWeights::kFieldCount * sizeof(double), '\0');
    for (size_t k = 0; k < ModelWeights::kFieldCount; ++k) {
      double v = w.field(k);
      std::memcpy(key.data() + k * sizeof(double), &v, sizeof(double));
    }
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<TranslationResult> decoded =
        translate_corpus(dev_sources, table, lm, w, config, params.threads);
    std::vector<std::vector<Token>> hyps;
    hyps.reserve(decoded.size());
    for (const TranslationResult& r : decoded) hyps.push_back(r.tokens);
    std::pair<double, double> obj = {corpus_bleu(hyps, dev_refs, {4, false}),
                                     corpus_bleu(hyps, dev_refs, {4, true})};
    memo.emplace(std::move(key), obj);
    return obj;
  };

  TuneResult result;
  result.weights = initial;
  std::pair<double, double> best = objective(initial);
  result.initial_bleu = best.first;

  for (uint32_t pass = 0; pass < params.max_passes; ++pass) {
    bool changed = false;
    for (size_t k = 0; k < ModelWeights::kFieldCount; ++k) {
      for (uint32_t g = 0; g < params.grid_points; ++g) {
        double value = params.grid_points == 1
                           ? params.grid_min
                           : params.grid_min + (params.grid_max - params.grid_min) *
                                                   static_cast<double>(g) /
                                                   static_cast<double>(params.grid_points - 1);
        if (value == result.weights.field(k)) continue;
        ModelWeights candidate = result.weights;
        candidate.field(k) = value;
        std::pair<double, double> obj = objective(candidate);
        if (obj > best) {
          best = obj;
          result.weights = candidate;
          changed = true;
        }
      }
    }
    result.passes = pass + 1;
    if (!changed) break;
  }
  result.final_bleu = best.first;
  return result;
}

}  // namespace smtkit
