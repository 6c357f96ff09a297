// smtkit/pipeline.hpp
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

#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "smtkit/corpus.hpp"
#include "smtkit/decoder.hpp"
#include "smtkit/lexicon.hpp"
#include "smtkit/metrics.hpp"
#include "smtkit/model1.hpp"
#include "smtkit/ngram_lm.hpp"
#include "smtkit/phrases.hpp"
#include "smtkit/tuner.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// Config problems exit with usage status; everything else is a data error.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Stage { clean, extract_lexicon, augment, train, tune, translate, evaluate };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::clean: return "clean";
    case Stage::extract_lexicon: return "extract-lexicon";
    case Stage::augment: return "augment";
    case Stage::train: return "train";
    case Stage::tune: return "tune";
    case Stage::translate: return "translate";
    case Stage::evaluate: return "evaluate";
  }
  return "?";
}

inline Stage stage_from_string(const std::string& s) {
  if (s == "clean") return Stage::clean;
  if (s == "extract-lexicon") return Stage::extract_lexicon;
  if (s == "augment") return Stage::augment;
  if (s == "train") return Stage::train;
  if (s == "tune") return Stage::tune;
  if (s == "translate") return Stage::translate;
  if (s == "evaluate") return Stage::evaluate;
  throw ConfigError("unknown stage: " + s);
}

struct ExperimentConfig {
  std::string label = "system";
  std::string out_dir = "out";
  std::string source_lang = "mr";
  std::string target_lang = "hi";
  std::string train_source, train_target;
  std::string dev_source, dev_target;
  std::string test_source, test_reference;
  std::string source_synsets, target_synsets;
  std::string function_words, kridanta_pairs, verb_phrases;
  std::string exclusion_list;
  std::string subjective_sheet;
  bool clean_corpus = true;
  CleaningRules cleaning;
  bool use_synsets = false;
  bool use_function_words = false;
  bool use_kridanta = false;
  bool use_verb_phrases = false;
  std::set<Pos> synset_pos;  // empty = all parts of speech
  uint64_t replication = 1;
  EMConfig em;
  std::string symmetrization = "grow_diag";
  uint32_t max_phrase_len = 7;
  uint32_t lm_order = 3;
  double lm_alpha = 0.1;
  DecoderConfig decoder;
  ModelWeights weights;
  bool tuning = false;
  TunerParams tuner;
  unsigned threads = 1;
};

namespace detail {

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

inline bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "', " + where);
}

inline double cfg_double(const std::string& v, const std::string& where) {
  try {
    return parse_double(v, where);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline uint64_t cfg_uint(const std::string& v, const std::string& where) {
  try {
    return parse_uint(v, where);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

struct ConfigKey {
  const char* name;
  const char* comment;
  std::string (*get)(const ExperimentConfig&);
  void (*set)(ExperimentConfig&, const std::string&, const std::string&);
};

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"config_version", "config format version; must be 1",
       [](const ExperimentConfig&) { return std::string("1"); },
       [](ExperimentConfig&, const std::string& v, const std::string& where) {
         if (v != "1") throw ConfigError("unsupported config_version '" + v + "', " + where);
       }},
      {"label", "system name stamped into reports",
       [](const ExperimentConfig& c) { return c.label; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.label = v; }},
      {"out_dir", "directory for artifacts and manifests",
       [](const ExperimentConfig& c) { return c.out_dir; },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         if (v.empty()) throw ConfigError("out_dir must not be empty, " + where);
         c.out_dir = v;
       }},
      {"source_lang", "source language tag",
       [](const ExperimentConfig& c) { return c.source_lang; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.source_lang = v; }},
      {"target_lang", "target language tag",
       [](const ExperimentConfig& c) { return c.target_lang; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.target_lang = v; }},
      {"train_source", "training corpus, source side (one sentence per line)",
       [](const ExperimentConfig& c) { return c.train_source; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.train_source = v; }},
      {"train_target", "training corpus, target side",
       [](const ExperimentConfig& c) { return c.train_target; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.train_target = v; }},
      {"dev_source", "tuning dev set, source side (tokenized)",
       [](const ExperimentConfig& c) { return c.dev_source; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.dev_source = v; }},
      {"dev_target", "tuning dev set, reference side (tokenized)",
       [](const ExperimentConfig& c) { return c.dev_target; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.dev_target = v; }},
      {"test_source", "test input (tokenized, one sentence per line)",
       [](const ExperimentConfig& c) { return c.test_source; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.test_source = v; }},
      {"test_reference", "test reference (tokenized)",
       [](const ExperimentConfig& c) { return c.test_reference; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.test_reference = v; }},
      {"source_synsets", "source-language synset file (id, pos, lemmas[, gloss])",
       [](const ExperimentConfig& c) { return c.source_synsets; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.source_synsets = v; }},
      {"target_synsets", "target-language synset file, ids linked to the source file",
       [](const ExperimentConfig& c) { return c.target_synsets; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.target_synsets = v; }},
      {"function_words", "function-word pair list (source TAB target)",
       [](const ExperimentConfig& c) { return c.function_words; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.function_words = v; }},
      {"kridanta_pairs", "participial-form pair list (source TAB target)",
       [](const ExperimentConfig& c) { return c.kridanta_pairs; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.kridanta_pairs = v; }},
      {"verb_phrases", "verb-phrase pair list (source TAB target)",
       [](const ExperimentConfig& c) { return c.verb_phrases; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.verb_phrases = v; }},
      {"exclusion_list", "optional file of pair ids to drop during cleaning",
       [](const ExperimentConfig& c) { return c.exclusion_list; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) { c.exclusion_list = v; }},
      {"subjective_sheet", "optional CSV id,adequacy,fluency for the evaluate stage",
       [](const ExperimentConfig& c) { return c.subjective_sheet; },
       [](ExperimentConfig& c, const std::string& v, const std::string&) {
         c.subjective_sheet = v;
       }},
      {"clean_corpus", "run the cleaning stage before augmentation",
       [](const ExperimentConfig& c) { return bool_str(c.clean_corpus); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.clean_corpus = parse_bool(v, where);
       }},
      {"max_length_ratio", "cleaning: drop pairs whose token-count ratio exceeds this",
       [](const ExperimentConfig& c) { return format_sig(c.cleaning.max_length_ratio, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.cleaning.max_length_ratio = cfg_double(v, where);
       }},
      {"max_tokens", "cleaning: drop pairs with a side longer than this",
       [](const ExperimentConfig& c) { return std::to_string(c.cleaning.max_tokens); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.cleaning.max_tokens = cfg_uint(v, where);
       }},
      {"source_script", "cleaning charset rule: devanagari_ascii, ascii, or any",
       [](const ExperimentConfig& c) { return std::string(to_string(c.cleaning.source_script)); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         try {
           c.cleaning.source_script = script_rule_from_string(v);
         } catch (const Error& e) {
           throw ConfigError(std::string(e.what()) + ", " + where);
         }
       }},
      {"target_script", "cleaning charset rule for the target side",
       [](const ExperimentConfig& c) { return std::string(to_string(c.cleaning.target_script)); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         try {
           c.cleaning.target_script = script_rule_from_string(v);
         } catch (const Error& e) {
           throw ConfigError(std::string(e.what()) + ", " + where);
         }
       }},
      {"dedupe", "cleaning: drop exact duplicate pairs",
       [](const ExperimentConfig& c) { return bool_str(c.cleaning.dedupe); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.cleaning.dedupe = parse_bool(v, where);
       }},
      {"use_synsets", "augment with linked-synset cross products",
       [](const ExperimentConfig& c) { return bool_str(c.use_synsets); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.use_synsets = parse_bool(v, where);
       }},
      {"use_function_words", "augment with the function-word pair list",
       [](const ExperimentConfig& c) { return bool_str(c.use_function_words); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.use_function_words = parse_bool(v, where);
       }},
      {"use_kridanta", "augment with the kridanta pair list",
       [](const ExperimentConfig& c) { return bool_str(c.use_kridanta); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.use_kridanta = parse_bool(v, where);
       }},
      {"use_verb_phrases", "augment with the verb-phrase pair list",
       [](const ExperimentConfig& c) { return bool_str(c.use_verb_phrases); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.use_verb_phrases = parse_bool(v, where);
       }},
      {"synset_pos_filter", "comma list of noun,verb,adjective,adverb,other; empty keeps all",
       [](const ExperimentConfig& c) {
         std::vector<std::string> names;
         for (Pos p : c.synset_pos) names.push_back(to_string(p));
         return join(names, ",");
       },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.synset_pos.clear();
         if (v.empty()) return;
         for (const std::string& name : split(v, ',')) {
           auto pos = pos_from_string(trim(name));
           if (!pos) throw ConfigError("unknown part of speech '" + name + "', " + where);
           c.synset_pos.insert(*pos);
         }
       }},
      {"replication", "copies of each lexicon entry appended to the corpus",
       [](const ExperimentConfig& c) { return std::to_string(c.replication); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.replication = cfg_uint(v, where);
         if (c.replication < 1) throw ConfigError("replication must be >= 1, " + where);
       }},
      {"em_iterations", "word-alignment EM iteration cap",
       [](const ExperimentConfig& c) { return std::to_string(c.em.iterations); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.em.iterations = static_cast<uint32_t>(cfg_uint(v, where));
         if (c.em.iterations == 0) throw ConfigError("em_iterations must be >= 1, " + where);
       }},
      {"em_epsilon", "stop EM when log-likelihood gain drops below this",
       [](const ExperimentConfig& c) { return format_sig(c.em.epsilon, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.em.epsilon = cfg_double(v, where);
       }},
      {"em_floor", "probability floor for translation tables",
       [](const ExperimentConfig& c) { return format_sig(c.em.floor, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.em.floor = cfg_double(v, where);
         if (c.em.floor <= 0) throw ConfigError("em_floor must be positive, " + where);
       }},
      {"symmetrization", "alignment combination: intersection, union, or grow_diag",
       [](const ExperimentConfig& c) { return c.symmetrization; },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         try {
           symmetrization_from_string(v);
         } catch (const Error& e) {
           throw ConfigError(std::string(e.what()) + ", " + where);
         }
         c.symmetrization = v;
       }},
      {"max_phrase_len", "longest extracted phrase, in tokens",
       [](const ExperimentConfig& c) { return std::to_string(c.max_phrase_len); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.max_phrase_len = static_cast<uint32_t>(cfg_uint(v, where));
         if (c.max_phrase_len == 0) throw ConfigError("max_phrase_len must be >= 1, " + where);
       }},
      {"lm_order", "language model n-gram order",
       [](const ExperimentConfig& c) { return std::to_string(c.lm_order); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.lm_order = static_cast<uint32_t>(cfg_uint(v, where));
         if (c.lm_order == 0) throw ConfigError("lm_order must be >= 1, " + where);
       }},
      {"lm_alpha", "additive smoothing mass",
       [](const ExperimentConfig& c) { return format_sig(c.lm_alpha, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.lm_alpha = cfg_double(v, where);
         if (c.lm_alpha <= 0) throw ConfigError("lm_alpha must be positive, " + where);
       }},
      {"beam_size", "decoder stack size after pruning",
       [](const ExperimentConfig& c) { return std::to_string(c.decoder.beam_size); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.decoder.beam_size = cfg_uint(v, where);
         if (c.decoder.beam_size == 0) throw ConfigError("beam_size must be >= 1, " + where);
       }},
      {"distortion_limit", "max jump between consecutive phrases; -1 = unlimited",
       [](const ExperimentConfig& c) { return std::to_string(c.decoder.distortion_limit); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         if (v == "-1") {
           c.decoder.distortion_limit = -1;
         } else {
           c.decoder.distortion_limit = static_cast<int>(cfg_uint(v, where));
         }
       }},
      {"decode_max_length_ratio", "cap on output tokens per source token; 0 = uncapped",
       [](const ExperimentConfig& c) { return format_sig(c.decoder.max_length_ratio, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.decoder.max_length_ratio = cfg_double(v, where);
       }},
      {"weight_phrase_fwd", "log-linear weight: forward phrase probability",
       [](const ExperimentConfig& c) { return format_sig(c.weights.phrase_fwd, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.phrase_fwd = cfg_double(v, where);
       }},
      {"weight_phrase_rev", "log-linear weight: reverse phrase probability",
       [](const ExperimentConfig& c) { return format_sig(c.weights.phrase_rev, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.phrase_rev = cfg_double(v, where);
       }},
      {"weight_lex_fwd", "log-linear weight: forward lexical weight",
       [](const ExperimentConfig& c) { return format_sig(c.weights.lex_fwd, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.lex_fwd = cfg_double(v, where);
       }},
      {"weight_lex_rev", "log-linear weight: reverse lexical weight",
       [](const ExperimentConfig& c) { return format_sig(c.weights.lex_rev, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.lex_rev = cfg_double(v, where);
       }},
      {"weight_lm", "log-linear weight: language model",
       [](const ExperimentConfig& c) { return format_sig(c.weights.lm, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.lm = cfg_double(v, where);
       }},
      {"weight_word_penalty", "log-linear weight: output length penalty",
       [](const ExperimentConfig& c) { return format_sig(c.weights.word_penalty, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.word_penalty = cfg_double(v, where);
       }},
      {"weight_distortion", "log-linear weight: jump distance penalty",
       [](const ExperimentConfig& c) { return format_sig(c.weights.distortion, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.weights.distortion = cfg_double(v, where);
       }},
      {"tuning", "tune weights on the dev set before translating",
       [](const ExperimentConfig& c) { return bool_str(c.tuning); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.tuning = parse_bool(v, where);
       }},
      {"tuner_max_passes", "coordinate-ascent passes over all weights",
       [](const ExperimentConfig& c) { return std::to_string(c.tuner.max_passes); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.tuner.max_passes = static_cast<uint32_t>(cfg_uint(v, where));
       }},
      {"tuner_grid_points", "grid resolution per weight",
       [](const ExperimentConfig& c) { return std::to_string(c.tuner.grid_points); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.tuner.grid_points = static_cast<uint32_t>(cfg_uint(v, where));
         if (c.tuner.grid_points == 0) throw ConfigError("tuner_grid_points must be >= 1, " + where);
       }},
      {"tuner_grid_min", "lower end of the weight grid",
       [](const ExperimentConfig& c) { return format_sig(c.tuner.grid_min, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.tuner.grid_min = cfg_double(v, where);
       }},
      {"tuner_grid_max", "upper end of the weight grid",
       [](const ExperimentConfig& c) { return format_sig(c.tuner.grid_max, 17); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.tuner.grid_max = cfg_double(v, where);
       }},
      {"threads", "worker threads for decoding and tuning",
       [](const ExperimentConfig& c) { return std::to_string(c.threads); },
       [](ExperimentConfig& c, const std::string& v, const std::string& where) {
         c.threads = static_cast<unsigned>(cfg_uint(v, where));
         if (c.threads == 0) throw ConfigError("threads must be >= 1, " + where);
       }},
  };
  return keys;
}

}  // namespace detail

inline std::string config_template() {
  ExperimentConfig defaults;
  std::string out = "# experiment configuration\n";
  for (const detail::ConfigKey& k : detail::config_keys()) {
    out += "\n# ";
    out += k.comment;
    out += '\n';
    out += k.name;
    out += " = ";
    out += k.get(defaults);
    out += '\n';
  }
  return out;
}

// Every key in declaration order with its effective value; the manifest
// config hash is taken over this text.
inline std::string canonical_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const detail::ConfigKey& k : detail::config_keys()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

inline ExperimentConfig parse_config_text(const std::string& text, const std::string& what) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::vector<std::string> lines = split_lines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string where = "line " + std::to_string(n + 1) + " of " + what;
    std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value, " + where);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const detail::ConfigKey* def = nullptr;
    for (const detail::ConfigKey& k : detail::config_keys())
      if (key == k.name) {
        def = &k;
        break;
      }
    if (!def) throw ConfigError("unknown key '" + key + "', " + where);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "', " + where);
    def->set(cfg, value, where);
  }
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
  if (!file_exists(path)) throw ConfigError("config file not found: " + path);
  return parse_config_text(read_file(path), path);
}

struct StageResult {
  Stage stage = Stage::clean;
  bool skipped = false;
  std::vector<std::string> outputs;
};

namespace detail {

inline std::string art(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

inline std::string file_hash(const std::string& path) { return hash_hex(fnv1a64(read_file(path))); }

struct Manifest {
  std::string stage;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, content hash
  std::vector<std::pair<std::string, std::string>> outputs;  // path, content hash

  std::string to_tsv() const {
    std::string out = "stage\t" + stage + "\n";
    out += "config\t" + config_hash + "\n";
    for (const auto& [path, hash] : inputs) out += "input\t" + path + "\t" + hash + "\n";
    for (const auto& [path, hash] : outputs) out += "output\t" + path + "\t" + hash + "\n";
    return out;
  }

  static Manifest parse(const std::string& text) {
    Manifest m;
    for (const std::string& line : split_lines(text)) {
      std::vector<std::string> fields = split(line, '\t');
      if (fields.size() == 2 && fields[0] == "stage") m.stage = fields[1];
      if (fields.size() == 2 && fields[0] == "config") m.config_hash = fields[1];
      if (fields.size() == 3 && fields[0] == "input") m.inputs.push_back({fields[1], fields[2]});
      if (fields.size() == 3 && fields[0] == "output") m.outputs.push_back({fields[1], fields[2]});
    }
    return m;
  }
};

// Missing-prerequisite guard: artifacts of earlier stages must already exist.
inline void require_artifact(const std::string& path, const std::string& what,
                             const std::string& producer) {
  if (!file_exists(path)) throw Error("missing " + what + "; run " + producer);
}

inline void require_path(const std::string& value, const std::string& key,
                         const std::string& stage) {
  if (value.empty()) throw Error(std::string(key) + " required for stage " + stage);
  if (!file_exists(value)) throw Error("file not found: " + value + " (" + key + ")");
}

inline std::map<std::string, std::string> read_kv_tsv(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const std::string& line : split_lines(read_file(path))) {
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() == 2) out[fields[0]] = fields[1];
  }
  return out;
}

}  // namespace detail

// One pipeline stage: check prerequisites, skip when the manifest still
// matches every input and output, otherwise compute and write artifacts plus
// a fresh manifest.
inline StageResult run_stage(Stage stage, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  using detail::art;
  fs::create_directories(cfg.out_dir);

  std::vector<std::string> inputs;   // existing files feeding this stage
  std::vector<std::string> outputs;  // artifact names (relative to out_dir)
  const std::string stage_name = to_string(stage);

  switch (stage) {
    case Stage::clean:
      detail::require_path(cfg.train_source, "train_source", stage_name);
      detail::require_path(cfg.train_target, "train_target", stage_name);
      inputs = {cfg.train_source, cfg.train_target};
      if (!cfg.exclusion_list.empty()) {
        detail::require_path(cfg.exclusion_list, "exclusion_list", stage_name);
        inputs.push_back(cfg.exclusion_list);
      }
      outputs = {"cleaned.src", "cleaned.tgt", "cleaning_report.tsv"};
      break;
    case Stage::extract_lexicon:
      if (cfg.use_synsets) {
        detail::require_path(cfg.source_synsets, "source_synsets", stage_name);
        detail::require_path(cfg.target_synsets, "target_synsets", stage_name);
        inputs.push_back(cfg.source_synsets);
        inputs.push_back(cfg.target_synsets);
      }
      if (cfg.use_function_words) {
        detail::require_path(cfg.function_words, "function_words", stage_name);
        inputs.push_back(cfg.function_words);
      }
      if (cfg.use_kridanta) {
        detail::require_path(cfg.kridanta_pairs, "kridanta_pairs", stage_name);
        inputs.push_back(cfg.kridanta_pairs);
      }
      if (cfg.use_verb_phrases) {
        detail::require_path(cfg.verb_phrases, "verb_phrases", stage_name);
        inputs.push_back(cfg.verb_phrases);
      }
      outputs = {"lexicon.tsv"};
      break;
    case Stage::augment:
      if (cfg.clean_corpus) {
        detail::require_artifact(art(cfg, "cleaned.src"), "cleaned corpus", "clean");
        detail::require_artifact(art(cfg, "cleaned.tgt"), "cleaned corpus", "clean");
        inputs = {art(cfg, "cleaned.src"), art(cfg, "cleaned.tgt")};
      } else {
        detail::require_path(cfg.train_source, "train_source", stage_name);
        detail::require_path(cfg.train_target, "train_target", stage_name);
        inputs = {cfg.train_source, cfg.train_target};
      }
      if (cfg.use_synsets || cfg.use_function_words || cfg.use_kridanta || cfg.use_verb_phrases) {
        detail::require_artifact(art(cfg, "lexicon.tsv"), "lexicon", "extract-lexicon");
        inputs.push_back(art(cfg, "lexicon.tsv"));
      }
      outputs = {"augmented.src", "augmented.tgt", "augmented.tags.tsv"};
      break;
    case Stage::train:
      detail::require_artifact(art(cfg, "augmented.src"), "augmented corpus", "augment");
      detail::require_artifact(art(cfg, "augmented.tgt"), "augmented corpus", "augment");
      inputs = {art(cfg, "augmented.src"), art(cfg, "augmented.tgt")};
      outputs = {"model1.fwd.tsv", "model1.rev.tsv", "phrase_table.txt", "lm.tsv"};
      break;
    case Stage::tune:
      detail::require_artifact(art(cfg, "phrase_table.txt"), "trained models", "train");
      detail::require_artifact(art(cfg, "lm.tsv"), "trained models", "train");
      detail::require_path(cfg.dev_source, "dev_source", stage_name);
      detail::require_path(cfg.dev_target, "dev_target", stage_name);
      inputs = {art(cfg, "phrase_table.txt"), art(cfg, "lm.tsv"), cfg.dev_source, cfg.dev_target};
      outputs = {"weights.tsv", "tuning.tsv"};
      break;
    case Stage::translate:
      detail::require_artifact(art(cfg, "phrase_table.txt"), "trained models", "train");
      detail::require_artifact(art(cfg, "lm.tsv"), "trained models", "train");
      detail::require_path(cfg.test_source, "test_source", stage_name);
      inputs = {art(cfg, "phrase_table.txt"), art(cfg, "lm.tsv"), cfg.test_source};
      if (cfg.tuning) {
        detail::require_artifact(art(cfg, "weights.tsv"), "tuned weights", "tune");
        inputs.push_back(art(cfg, "weights.tsv"));
      }
      outputs = {"translation.txt", "translation_stats.tsv"};
      break;
    case Stage::evaluate:
      detail::require_artifact(art(cfg, "translation.txt"), "translations", "translate");
      detail::require_artifact(art(cfg, "translation_stats.tsv"), "translations", "translate");
      detail::require_path(cfg.test_reference, "test_reference", stage_name);
      inputs = {art(cfg, "translation.txt"), art(cfg, "translation_stats.tsv"),
                cfg.test_reference};
      if (!cfg.subjective_sheet.empty()) {
        detail::require_path(cfg.subjective_sheet, "subjective_sheet", stage_name);
        inputs.push_back(cfg.subjective_sheet);
      }
      outputs = {"report.tsv", "report.sentences.tsv"};
      break;
  }

  detail::Manifest manifest;
  manifest.stage = stage_name;
  manifest.config_hash = hash_hex(fnv1a64(canonical_config(cfg)));
  for (const std::string& path : inputs)
    manifest.inputs.push_back({path, detail::file_hash(path)});

  StageResult result;
  result.stage = stage;
  for (const std::string& name : outputs) result.outputs.push_back(art(cfg, name));

  const std::string manifest_path = art(cfg, stage_name + ".manifest.tsv");
  if (file_exists(manifest_path)) {
    detail::Manifest old = detail::Manifest::parse(read_file(manifest_path));
    bool match = old.stage == manifest.stage && old.config_hash == manifest.config_hash &&
                 old.inputs == manifest.inputs && old.outputs.size() == outputs.size();
    if (match) {
      for (const auto& [path, hash] : old.outputs)
        if (!file_exists(path) || detail::file_hash(path) != hash) {
          match = false;
          break;
        }
    }
    if (match) {
      result.skipped = true;
      return result;
    }
  }

  switch (stage) {
    case Stage::clean: {
      ParallelCorpus corpus =
          load_parallel(cfg.train_source, cfg.train_target, cfg.source_lang, cfg.target_lang);
      CleaningRules rules = cfg.cleaning;
      if (!cfg.exclusion_list.empty()) rules.excluded_ids = load_exclusion_list(cfg.exclusion_list);
      auto [cleaned, report] = clean(corpus, rules);
      write_corpus(cleaned, art(cfg, "cleaned.src"), art(cfg, "cleaned.tgt"));
      write_file(art(cfg, "cleaning_report.tsv"), report_to_tsv(report));
      break;
    }
    case Stage::extract_lexicon: {
      BilingualLexicon lexicon;
      if (cfg.use_synsets) {
        std::vector<Synset> src = parse_synset_file(cfg.source_synsets);
        std::vector<Synset> tgt = parse_synset_file(cfg.target_synsets);
        const std::set<Pos>* filter = cfg.synset_pos.empty() ? nullptr : &cfg.synset_pos;
        BilingualLexicon pairs = extract_bilingual_pairs(src, tgt, filter);
        for (const LexiconEntry& e : pairs.entries()) lexicon.add(e);
      }
      if (cfg.use_function_words)
        for (LexiconEntry& e : load_pair_list(cfg.function_words, ResourceKind::function_word))
          lexicon.add(std::move(e));
      if (cfg.use_kridanta)
        for (LexiconEntry& e : load_pair_list(cfg.kridanta_pairs, ResourceKind::kridanta))
          lexicon.add(std::move(e));
      if (cfg.use_verb_phrases)
        for (LexiconEntry& e : load_pair_list(cfg.verb_phrases, ResourceKind::verb_phrase))
          lexicon.add(std::move(e));
      write_file(art(cfg, "lexicon.tsv"), lexicon_to_tsv(lexicon));
      break;
    }
    case Stage::augment: {
      ParallelCorpus corpus =
          cfg.clean_corpus
              ? load_tokenized_parallel(art(cfg, "cleaned.src"), art(cfg, "cleaned.tgt"),
                                        cfg.source_lang, cfg.target_lang)
              : load_parallel(cfg.train_source, cfg.train_target, cfg.source_lang,
                              cfg.target_lang);
      BilingualLexicon lexicon;
      if (cfg.use_synsets || cfg.use_function_words || cfg.use_kridanta || cfg.use_verb_phrases)
        lexicon = lexicon_from_tsv(read_file(art(cfg, "lexicon.tsv")), art(cfg, "lexicon.tsv"));
      ParallelCorpus augmented = augment(corpus, lexicon, cfg.replication);
      write_corpus(augmented, art(cfg, "augmented.src"), art(cfg, "augmented.tgt"));
      std::string tags;
      for (const SentencePair& p : augmented.pairs)
        tags += std::to_string(p.id) + "\t" + to_string(p.origin) + "\n";
      write_file(art(cfg, "augmented.tags.tsv"), tags);
      break;
    }
    case Stage::train: {
      ParallelCorpus corpus = load_tokenized_parallel(art(cfg, "augmented.src"),
                                                      art(cfg, "augmented.tgt"), cfg.source_lang,
                                                      cfg.target_lang);
      ParallelCorpus usable;
      usable.source_lang = corpus.source_lang;
      usable.target_lang = corpus.target_lang;
      for (SentencePair& p : corpus.pairs)
        if (!p.source.empty() && !p.target.empty()) usable.pairs.push_back(std::move(p));
      if (usable.pairs.empty()) throw Error("training corpus is empty after dropping empty pairs");

      ParallelCorpus swapped;
      swapped.source_lang = usable.target_lang;
      swapped.target_lang = usable.source_lang;
      for (const SentencePair& p : usable.pairs)
        swapped.pairs.push_back({p.id, p.target, p.source, p.origin});

      EMResult fwd = train_model1(usable, cfg.em);
      EMResult rev = train_model1(swapped, cfg.em);
      Symmetrization heuristic = symmetrization_from_string(cfg.symmetrization);

      std::vector<PhrasePair> instances;
      for (size_t k = 0; k < usable.pairs.size(); ++k) {
        AlignmentLinkSet fa = viterbi_align(fwd.table, usable.pairs[k]);
        AlignmentLinkSet ra = viterbi_align(rev.table, swapped.pairs[k]);
        AlignmentLinkSet sym = symmetrize(fa, transpose(ra), heuristic);
        std::vector<PhrasePair> extracted =
            extract_phrases(usable.pairs[k], sym, cfg.max_phrase_len);
        instances.insert(instances.end(), extracted.begin(), extracted.end());
      }
      PhraseTable table = score_phrase_table(instances, fwd.table, rev.table);

      std::vector<std::vector<Token>> target_sides;
      for (const SentencePair& p : usable.pairs) target_sides.push_back(p.target);
      NGramModel lm = NGramModel::train(target_sides, cfg.lm_order, cfg.lm_alpha);

      write_file(art(cfg, "model1.fwd.tsv"), fwd.table.to_tsv());
      write_file(art(cfg, "model1.rev.tsv"), rev.table.to_tsv());
      write_file(art(cfg, "phrase_table.txt"), table.to_text());
      write_file(art(cfg, "lm.tsv"), lm.to_tsv());
      break;
    }
    case Stage::tune: {
      PhraseTable table =
          PhraseTable::from_text(read_file(art(cfg, "phrase_table.txt")), "phrase_table.txt");
      NGramModel lm = NGramModel::from_tsv(read_file(art(cfg, "lm.tsv")), "lm.tsv");
      ParallelCorpus dev = load_tokenized_parallel(cfg.dev_source, cfg.dev_target,
                                                   cfg.source_lang, cfg.target_lang);
      std::vector<std::vector<Token>> sources, refs;
      for (const SentencePair& p : dev.pairs) {
        sources.push_back(p.source);
        refs.push_back(p.target);
      }
      TunerParams params = cfg.tuner;
      params.threads = cfg.threads;
      TuneResult tuned = tune(sources, refs, table, lm, cfg.weights, cfg.decoder, params);
      write_file(art(cfg, "weights.tsv"), tuned.weights.to_tsv());
      std::string stats = "initial_bleu\t" + format_sig(tuned.initial_bleu, 17) + "\n";
      stats += "final_bleu\t" + format_sig(tuned.final_bleu, 17) + "\n";
      stats += "passes\t" + std::to_string(tuned.passes) + "\n";
      write_file(art(cfg, "tuning.tsv"), stats);
      break;
    }
    case Stage::translate: {
      PhraseTable table =
          PhraseTable::from_text(read_file(art(cfg, "phrase_table.txt")), "phrase_table.txt");
      NGramModel lm = NGramModel::from_tsv(read_file(art(cfg, "lm.tsv")), "lm.tsv");
      ModelWeights weights =
          cfg.tuning ? ModelWeights::from_tsv(read_file(art(cfg, "weights.tsv")), "weights.tsv")
                     : cfg.weights;
      std::vector<std::vector<Token>> sources = load_tokenized_lines(cfg.test_source);
      std::vector<TranslationResult> results =
          translate_corpus(sources, table, lm, weights, cfg.decoder, cfg.threads);
      std::string text;
      uint64_t oov = 0;
      for (const TranslationResult& r : results) {
        text += join(r.tokens, " ");
        text += '\n';
        oov += r.oov_count;
      }
      write_file(art(cfg, "translation.txt"), text);
      std::string stats = "sentences\t" + std::to_string(results.size()) + "\n";
      stats += "oov_copies\t" + std::to_string(oov) + "\n";
      stats += "weights_hash\t" + hash_hex(fnv1a64(weights.to_tsv())) + "\n";
      write_file(art(cfg, "translation_stats.tsv"), stats);
      break;
    }
    case Stage::evaluate: {
      std::vector<std::vector<Token>> hyps = load_tokenized_lines(art(cfg, "translation.txt"));
      std::vector<std::vector<Token>> refs = load_tokenized_lines(cfg.test_reference);
      EvaluationReport report;
      report.label = cfg.label;
      report.sentences = hyps.size();
      report.bleu = corpus_bleu(hyps, refs, {4, false});
      report.ter = corpus_ter(hyps, refs);
      report.meteor = corpus_meteor(hyps, refs);
      std::map<std::string, std::string> stats =
          detail::read_kv_tsv(art(cfg, "translation_stats.tsv"));
      if (!stats.count("oov_copies") || !stats.count("weights_hash"))
        throw Error("malformed translation_stats.tsv; run translate");

      std::string text = "label\t" + report.label + "\n";
      text += "sentences\t" + std::to_string(report.sentences) + "\n";
      text += "bleu\t" + format_sig(report.bleu, 6) + "\n";
      text += "ter\t" + format_sig(report.ter, 6) + "\n";
      text += "meteor-exact\t" + format_sig(report.meteor, 6) + "\n";
      text += "oov_copies\t" + stats["oov_copies"] + "\n";
      text += "weights_hash\t" + stats["weights_hash"] + "\n";
      if (!cfg.subjective_sheet.empty()) {
        SubjectiveSheet sheet =
            parse_subjective_csv(read_file(cfg.subjective_sheet), cfg.subjective_sheet);
        SubjectiveScores scores = subjective_score(sheet);
        text += "adequacy_pct\t" + format_sig(scores.adequacy_pct, 6) + "\n";
        text += "fluency_pct\t" + format_sig(scores.fluency_pct, 6) + "\n";
      }
      write_file(art(cfg, "report.tsv"), text);

      std::string per_sentence;
      for (size_t k = 0; k < hyps.size(); ++k) {
        per_sentence += std::to_string(k + 1);
        per_sentence += '\t';
        per_sentence += format_sig(sentence_bleu(hyps[k], refs[k]), 6);
        per_sentence += '\t';
        per_sentence += format_sig(ter(hyps[k], refs[k]), 6);
        per_sentence += '\t';
        per_sentence += format_sig(meteor_exact(hyps[k], refs[k]), 6);
        per_sentence += '\n';
      }
      write_file(art(cfg, "report.sentences.tsv"), per_sentence);
      break;
    }
  }

  for (const std::string& path : result.outputs)
    manifest.outputs.push_back({path, detail::file_hash(path)});
  write_file(manifest_path, manifest.to_tsv());
  return result;
}

// The five experiment rungs: raw corpus, cleaned corpus, then cumulative
// lexicon resources (synsets, function words + kridanta forms, verb phrases).
struct LadderRung {
  std::string name;
  bool clean = true;
  bool synsets = false;
  bool function_words = false;
  bool kridanta = false;
  bool verb_phrases = false;
};

inline const std::vector<LadderRung>& ladder_rungs() {
  static const std::vector<LadderRung> rungs = {
      {"uncleaned", false, false, false, false, false},
      {"cleaned", true, false, false, false, false},
      {"wordnet", true, true, false, false, false},
      {"function_kridanta", true, true, true, true, false},
      {"verb_phrases", true, true, true, true, true},
  };
  return rungs;
}

using LadderObserver = std::function<void(const std::string& rung, const StageResult&)>;

// Runs all five configurations under out_dir/rung<k>_<name>/ and returns the
// five report paths in rung order.
inline std::vector<std::string> run_ladder(const ExperimentConfig& cfg,
                                           const LadderObserver& observer = nullptr) {
  detail::require_path(cfg.train_source, "train_source", "ladder");
  detail::require_path(cfg.train_target, "train_target", "ladder");
  detail::require_path(cfg.test_source, "test_source", "ladder");
  detail::require_path(cfg.test_reference, "test_reference", "ladder");
  detail::require_path(cfg.source_synsets, "source_synsets", "ladder");
  detail::require_path(cfg.target_synsets, "target_synsets", "ladder");
  detail::require_path(cfg.function_words, "function_words", "ladder");
  detail::require_path(cfg.kridanta_pairs, "kridanta_pairs", "ladder");
  detail::require_path(cfg.verb_phrases, "verb_phrases", "ladder");
  if (cfg.tuning) {
    detail::require_path(cfg.dev_source, "dev_source", "ladder");
    detail::require_path(cfg.dev_target, "dev_target", "ladder");
  }

  std::vector<std::string> reports;
  const std::vector<LadderRung>& rungs = ladder_rungs();
  for (size_t k = 0; k < rungs.size(); ++k) {
    const LadderRung& rung = rungs[k];
    ExperimentConfig sub = cfg;
    sub.label = cfg.label + "_" + rung.name;
    sub.out_dir = cfg.out_dir + "/rung" + std::to_string(k + 1) + "_" + rung.name;
    sub.clean_corpus = rung.clean;
    sub.use_synsets = rung.synsets;
    sub.use_function_words = rung.function_words;
    sub.use_kridanta = rung.kridanta;
    sub.use_verb_phrases = rung.verb_phrases;

    std::vector<Stage> stages;
    if (sub.clean_corpus) stages.push_back(Stage::clean);
    if (sub.use_synsets || sub.use_function_words || sub.use_kridanta || sub.use_verb_phrases)
      stages.push_back(Stage::extract_lexicon);
    stages.push_back(Stage::augment);
    stages.push_back(Stage::train);
    if (sub.tuning) stages.push_back(Stage::tune);
    stages.push_back(Stage::translate);
    stages.push_back(Stage::evaluate);

    for (Stage stage : stages) {
      StageResult r = run_stage(stage, sub);
      if (observer) observer(rung.name, r);
    }
    reports.push_back(detail::art(sub, "report.tsv"));
  }
  return reports;
}

}  // namespace smtkit
