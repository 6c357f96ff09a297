// smtkit/lexicon.hpp
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

// Lexical resources: synset files linked by id, bilingual pair extraction
// (cross product per shared synset id), pair lists (function words, kridanta
// forms, verb phrases) and corpus augmentation.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "smtkit/corpus.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

enum class Pos { noun, verb, adjective, adverb, other };

inline const char* to_string(Pos p) {
  switch (p) {
    case Pos::noun: return "noun";
    case Pos::verb: return "verb";
    case Pos::adjective: return "adjective";
    case Pos::adverb: return "adverb";
    case Pos::other: return "other";
  }
  return "other";
}

inline std::optional<Pos> pos_from_string(const std::string& s) {
  if (s == "noun") return Pos::noun;
  if (s == "verb") return Pos::verb;
  if (s == "adjective") return Pos::adjective;
  if (s == "adverb") return Pos::adverb;
  if (s == "other") return Pos::other;
  return std::nullopt;
}

struct Synset {
  uint64_t id = 0;
  Pos pos = Pos::other;
  std::vector<std::string> lemmas;  // NFC, "_" joins multiword lemmas
  std::string gloss;
};

enum class ResourceKind { synset, function_word, kridanta, verb_phrase };

inline const char* to_string(ResourceKind k) {
  switch (k) {
    case ResourceKind::synset: return "synset";
    case ResourceKind::function_word: return "function_word";
    case ResourceKind::kridanta: return "kridanta";
    case ResourceKind::verb_phrase: return "verb_phrase";
  }
  return "?";
}

inline ResourceKind resource_kind_from_string(const std::string& s) {
  if (s == "synset") return ResourceKind::synset;
  if (s == "function_word") return ResourceKind::function_word;
  if (s == "kridanta") return ResourceKind::kridanta;
  if (s == "verb_phrase") return ResourceKind::verb_phrase;
  throw Error("unknown resource kind: " + s);
}

inline PairOrigin to_origin(ResourceKind k) {
  switch (k) {
    case ResourceKind::synset: return PairOrigin::synset;
    case ResourceKind::function_word: return PairOrigin::function_word;
    case ResourceKind::kridanta: return PairOrigin::kridanta;
    case ResourceKind::verb_phrase: return PairOrigin::verb_phrase;
  }
  return PairOrigin::corpus;
}

struct LexiconEntry {
  std::vector<Token> source_phrase;
  std::vector<Token> target_phrase;
  ResourceKind kind = ResourceKind::synset;
  uint64_t origin = 0;  // synset id or 1-based file line number
};

class BilingualLexicon {
 public:
  // Returns false on an exact (source, target, kind) duplicate.
  bool add(LexiconEntry entry) {
    std::string key = join(entry.source_phrase, " ");
    key += '\t';
    key += join(entry.target_phrase, " ");
    key += '\t';
    key += to_string(entry.kind);
    if (!seen_.insert(std::move(key)).second) return false;
    counts_[static_cast<size_t>(entry.kind)]++;
    entries_.push_back(std::move(entry));
    return true;
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  size_t count(ResourceKind k) const { return counts_[static_cast<size_t>(k)]; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<LexiconEntry> entries_;
  std::array<size_t, 4> counts_{};
  std::unordered_set<std::string> seen_;
};

// One synset per line: id <TAB> pos <TAB> comma-separated lemmas [<TAB> gloss].
inline std::vector<Synset> parse_synset_file(const std::string& path) {
  std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<Synset> out;
  std::unordered_set<uint64_t> ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string where = "line " + std::to_string(i + 1) + " of " + path;
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() < 3 || fields.size() > 4)
      throw Error("malformed synset line (want 3-4 tab fields, got " +
                  std::to_string(fields.size()) + "), " + where);
    Synset s;
    s.id = parse_uint(fields[0], where);
    std::optional<Pos> pos = pos_from_string(fields[1]);
    if (!pos) throw Error("malformed pos '" + fields[1] + "', " + where);
    s.pos = *pos;
    std::set<std::string> dedup;
    for (const std::string& raw : split(fields[2], ',')) {
      if (raw.empty()) continue;
      std::string lemma = nfc(raw);
      if (lemma.find(' ') != std::string::npos)
        throw Error("lemma contains a raw space (use '_'), " + where);
      if (dedup.insert(lemma).second) s.lemmas.push_back(std::move(lemma));
    }
    if (s.lemmas.empty()) throw Error("synset has no lemmas, " + where);
    if (fields.size() == 4) s.gloss = nfc(fields[3]);
    if (!ids.insert(s.id).second)
      throw Error("duplicate synset id " + std::to_string(s.id) + ", " + where);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Token> lemma_to_phrase(const std::string& lemma) {
  std::vector<Token> phrase;
  for (std::string& part : split(lemma, '_')) {
    if (!part.empty()) phrase.push_back(std::move(part));
  }
  return phrase;
}

// Cross product of lemmas for every synset id present on both sides, merged
// in ascending id order (lemma order within each synset preserved). Ids on
// one side only contribute nothing.
inline BilingualLexicon extract_bilingual_pairs(const std::vector<Synset>& source_synsets,
                                                const std::vector<Synset>& target_synsets,
                                                const std::set<Pos>* pos_allowlist = nullptr) {
  std::map<uint64_t, const Synset*> source_by_id, target_by_id;
  for (const Synset& s : source_synsets) source_by_id[s.id] = &s;
  for (const Synset& s : target_synsets) target_by_id[s.id] = &s;

  BilingualLexicon lexicon;
  for (const auto& [id, src] : source_by_id) {
    auto it = target_by_id.find(id);
    if (it == target_by_id.end()) continue;
    const Synset* tgt = it->second;
    if (pos_allowlist &&
        (!pos_allowlist->count(src->pos) || !pos_allowlist->count(tgt->pos)))
      continue;
    for (const std::string& sl : src->lemmas) {
      std::vector<Token> sp = lemma_to_phrase(sl);
      if (sp.empty()) continue;
      for (const std::string& tl : tgt->lemmas) {
        std::vector<Token> tp = lemma_to_phrase(tl);
        if (tp.empty()) continue;
        lexicon.add({sp, tp, ResourceKind::synset, id});
      }
    }
  }
  return lexicon;
}

// TSV pair list: source_phrase <TAB> target_phrase. Underscore notation is
// kept literal ("_ना_चाहिए" stays one token).
inline std::vector<LexiconEntry> load_pair_list(const std::string& path, ResourceKind kind) {
  std::vector<std::string> lines = split_lines(read_file(path));
  std::vector<LexiconEntry> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2)
      throw Error("pair list line must have 2 tab fields, got " + std::to_string(fields.size()) +
                  ", line " + std::to_string(i + 1) + " of " + path);
    LexiconEntry e;
    e.source_phrase = split_tokens(fields[0]);
    e.target_phrase = split_tokens(fields[1]);
    e.kind = kind;
    e.origin = i + 1;
    if (e.source_phrase.empty() || e.target_phrase.empty())
      throw Error("empty phrase in pair list, line " + std::to_string(i + 1) + " of " + path);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string pair_list_to_tsv(const std::vector<LexiconEntry>& entries) {
  std::string out;
  for (const LexiconEntry& e : entries) {
    out += join(e.source_phrase, " ");
    out += '\t';
    out += join(e.target_phrase, " ");
    out += '\n';
  }
  return out;
}

// Lexicon export: source <TAB> target <TAB> kind.
inline std::string lexicon_to_tsv(const BilingualLexicon& lexicon) {
  std::string out;
  for (const LexiconEntry& e : lexicon.entries()) {
    out += join(e.source_phrase, " ");
    out += '\t';
    out += join(e.target_phrase, " ");
    out += '\t';
    out += to_string(e.kind);
    out += '\n';
  }
  return out;
}

inline BilingualLexicon lexicon_from_tsv(const std::string& text, const std::string& what) {
  BilingualLexicon lexicon;
  std::vector<std::string> lines = split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 3)
      throw Error("lexicon line must have 3 tab fields, line " + std::to_string(i + 1) + " of " +
                  what);
    LexiconEntry e;
    e.source_phrase = split_tokens(fields[0]);
    e.target_phrase = split_tokens(fields[1]);
    e.kind = resource_kind_from_string(fields[2]);
    e.origin = i + 1;
    lexicon.add(std::move(e));
  }
  return lexicon;
}

// Appends every lexicon entry as a pseudo sentence pair, `replication` times,
// ids continuing after the current maximum. Original pairs are untouched.
inline ParallelCorpus augment(const ParallelCorpus& corpus, const BilingualLexicon& lexicon,
                              uint64_t replication = 1) {
  if (replication < 1) throw Error("replication must be >= 1");
  ParallelCorpus out = corpus;
  uint64_t next_id = 0;
  for (const SentencePair& p : corpus.pairs) next_id = std::max(next_id, p.id + 1);
  for (const LexiconEntry& e : lexicon.entries()) {
    for (uint64_t r = 0; r < replication; ++r) {
      SentencePair p;
      p.id = next_id++;
      p.source = e.source_phrase;
      p.target = e.target_phrase;
      p.origin = to_origin(e.kind);
      out.pairs.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace smtkit
