// smtkit/corpus.hpp
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

// Parallel corpus loading, tokenization and mechanical cleaning filters.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "smtkit/unicode.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// Tokens are NFC-normalized, non-empty, whitespace-free strings.
using Token = std::string;

// Provenance of a sentence pair: ordinary corpus data or an injected lexical
// resource (kept so augmented corpora stay auditable).
enum class PairOrigin { corpus, synset, function_word, kridanta, verb_phrase };

inline const char* to_string(PairOrigin o) {
  switch (o) {
    case PairOrigin::corpus: return "corpus";
    case PairOrigin::synset: return "synset";
    case PairOrigin::function_word: return "function_word";
    case PairOrigin::kridanta: return "kridanta";
    case PairOrigin::verb_phrase: return "verb_phrase";
  }
  return "corpus";
}

struct SentencePair {
  uint64_t id = 0;
  std::vector<Token> source;
  std::vector<Token> target;
  PairOrigin origin = PairOrigin::corpus;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::string source_lang;
  std::string target_lang;
};

// Whitespace tokenizer over NFC-normalized text. Sentence-final danda and
// ASCII ./?/! are split off the last token; other punctuation stays attached
// (agglutinated word forms are single tokens).
inline std::vector<Token> tokenize(std::string_view text, const std::string& /*lang*/ = "") {
  std::vector<uint32_t> cps = nfc(decode_utf8(text));
  std::vector<std::vector<uint32_t>> words;
  std::vector<uint32_t> cur;
  for (uint32_t cp : cps) {
    if (is_space(cp)) {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));

  std::vector<Token> out;
  out.reserve(words.size() + 1);
  auto is_final_mark = [](uint32_t cp) {
    return cp == 0x0964 /* danda */ || cp == '.' || cp == '?' || cp == '!';
  };
  for (size_t w = 0; w < words.size(); ++w) {
    std::vector<uint32_t>& word = words[w];
    if (w + 1 == words.size()) {
      std::vector<uint32_t> detached;
      while (word.size() > 1 && is_final_mark(word.back())) {
        detached.push_back(word.back());
        word.pop_back();
      }
      out.push_back(encode_utf8(word));
      for (auto it = detached.rbegin(); it != detached.rend(); ++it)
        out.push_back(encode_utf8({*it}));
    } else {
      out.push_back(encode_utf8(word));
    }
  }
  return out;
}

// Tokenization for pre-tokenized or dictionary-style text: NFC + whitespace
// split only, so joining with single spaces is lossless.
inline std::vector<Token> split_tokens(std::string_view text) {
  std::vector<uint32_t> cps = nfc(decode_utf8(text));
  std::vector<Token> out;
  std::string cur;
  for (uint32_t cp : cps) {
    if (is_space(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      append_utf8(cur, cp);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Loads two line-parallel UTF-8 files; line i of each forms pair i.
inline ParallelCorpus load_parallel(const std::string& source_path, const std::string& target_path,
                                    const std::string& source_lang = "mr",
                                    const std::string& target_lang = "hi") {
  std::string src_text = read_file(source_path);
  std::string tgt_text = read_file(target_path);
  // decode up front so the error carries a byte offset into the right file
  try {
    decode_utf8(src_text);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " in " + source_path);
  }
  try {
    decode_utf8(tgt_text);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " in " + target_path);
  }
  std::vector<std::string> src_lines = split_lines(src_text);
  std::vector<std::string> tgt_lines = split_lines(tgt_text);
  if (src_lines.size() != tgt_lines.size()) {
    throw Error("line count mismatch " + std::to_string(src_lines.size()) + " vs " +
                std::to_string(tgt_lines.size()) + " (" + source_path + ", " + target_path + ")");
  }
  ParallelCorpus corpus;
  corpus.source_lang = source_lang;
  corpus.target_lang = target_lang;
  corpus.pairs.reserve(src_lines.size());
  for (size_t i = 0; i < src_lines.size(); ++i) {
    SentencePair p;
    p.id = i;
    p.source = tokenize(src_lines[i], source_lang);
    p.target = tokenize(tgt_lines[i], target_lang);
    corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

enum class RemovalReason { empty_side, length_ratio, charset, duplicate, overlong, excluded };

inline const char* to_string(RemovalReason r) {
  switch (r) {
    case RemovalReason::empty_side: return "empty_side";
    case RemovalReason::length_ratio: return "length_ratio";
    case RemovalReason::charset: return "charset";
    case RemovalReason::duplicate: return "duplicate";
    case RemovalReason::overlong: return "overlong";
    case RemovalReason::excluded: return "excluded";
  }
  return "?";
}

struct CleaningRules {
  double max_length_ratio = 3.0;
  size_t max_tokens = 100;
  ScriptRule source_script = ScriptRule::devanagari_ascii;
  ScriptRule target_script = ScriptRule::devanagari_ascii;
  bool dedupe = true;
  std::set<uint64_t> excluded_ids;  // manual exclusion list
};

struct CleaningReport {
  size_t input_count = 0;
  size_t kept_count = 0;
  std::vector<std::pair<uint64_t, RemovalReason>> removals;
};

inline std::optional<RemovalReason> removal_reason(const SentencePair& p, const CleaningRules& rules) {
  if (rules.excluded_ids.count(p.id)) return RemovalReason::excluded;
  if (p.source.empty() || p.target.empty()) return RemovalReason::empty_side;
  if (p.source.size() > rules.max_tokens || p.target.size() > rules.max_tokens)
    return RemovalReason::overlong;
  double longer = static_cast<double>(std::max(p.source.size(), p.target.size()));
  double shorter = static_cast<double>(std::min(p.source.size(), p.target.size()));
  if (longer / shorter > rules.max_length_ratio) return RemovalReason::length_ratio;
  for (const Token& t : p.source)
    if (!token_allowed(t, rules.source_script)) return RemovalReason::charset;
  for (const Token& t : p.target)
    if (!token_allowed(t, rules.target_script)) return RemovalReason::charset;
  return std::nullopt;
}

// Applies the mechanical filters; survivor order is preserved and every
// removal is listed with the first rule that fired.
inline std::pair<ParallelCorpus, CleaningReport> clean(const ParallelCorpus& corpus,
                                                       const CleaningRules& rules = {}) {
  ParallelCorpus out;
  out.source_lang = corpus.source_lang;
  out.target_lang = corpus.target_lang;
  CleaningReport report;
  report.input_count = corpus.pairs.size();
  std::unordered_set<std::string> seen;
  for (const SentencePair& p : corpus.pairs) {
    std::optional<RemovalReason> reason = removal_reason(p, rules);
    if (!reason && rules.dedupe) {
      std::string key = join(p.source, " ") + "\t" + join(p.target, " ");
      if (!seen.insert(key).second) reason = RemovalReason::duplicate;
    }
    if (reason) {
      report.removals.emplace_back(p.id, *reason);
    } else {
      out.pairs.push_back(p);
    }
  }
  report.kept_count = out.pairs.size();
  return {std::move(out), std::move(report)};
}

inline std::string report_to_tsv(const CleaningReport& report) {
  std::string out;
  for (const auto& [id, reason] : report.removals) {
    out += std::to_string(id);
    out += '\t';
    out += to_string(reason);
    out += '\n';
  }
  return out;
}

// One pair id per line; blank lines ignored.
inline std::set<uint64_t> load_exclusion_list(const std::string& path) {
  std::set<uint64_t> ids;
  std::vector<std::string> lines = split_lines(read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ids.insert(parse_uint(lines[i], "line " + std::to_string(i + 1) + " of " + path));
  }
  return ids;
}

// One pre-tokenized sentence per line: whitespace split only, no
// sentence-mark detaching, so written corpora reload losslessly.
inline std::vector<std::vector<Token>> load_tokenized_lines(const std::string& path) {
  std::string text = read_file(path);
  try {
    decode_utf8(text);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " in " + path);
  }
  std::vector<std::vector<Token>> out;
  for (const std::string& line : split_lines(text)) out.push_back(split_tokens(line));
  return out;
}

inline ParallelCorpus load_tokenized_parallel(const std::string& source_path,
                                              const std::string& target_path,
                                              const std::string& source_lang = "mr",
                                              const std::string& target_lang = "hi") {
  std::vector<std::vector<Token>> src = load_tokenized_lines(source_path);
  std::vector<std::vector<Token>> tgt = load_tokenized_lines(target_path);
  if (src.size() != tgt.size())
    throw Error("line count mismatch " + std::to_string(src.size()) + " vs " +
                std::to_string(tgt.size()) + " (" + source_path + ", " + target_path + ")");
  ParallelCorpus corpus;
  corpus.source_lang = source_lang;
  corpus.target_lang = target_lang;
  corpus.pairs.reserve(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    SentencePair p;
    p.id = i;
    p.source = std::move(src[i]);
    p.target = std::move(tgt[i]);
    corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

inline void write_corpus(const ParallelCorpus& corpus, const std::string& source_path,
                         const std::string& target_path) {
  std::string src, tgt;
  for (const SentencePair& p : corpus.pairs) {
    src += join(p.source, " ");
    src += '\n';
    tgt += join(p.target, " ");
    tgt += '\n';
  }
  write_file(source_path, src);
  write_file(target_path, tgt);
}

}  // namespace smtkit
