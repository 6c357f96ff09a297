// smtkit/unicode.hpp
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

// UTF-8 handling and canonical (NFC) normalization. The tables in
// unicode_data.hpp cover code points below U+1000, which is complete for
// Devanagari plus the Latin/Greek/Cyrillic/Semitic ranges; higher code
// points pass through as inert starters. Normalization is idempotent for
// every input either way.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smtkit/unicode_data.hpp"
#include "smtkit/util.hpp"

namespace smtkit {

// Strict UTF-8 decoder: rejects overlong forms, surrogates and values past
// U+10FFFF. On bad input throws with the byte offset of the offending byte.
inline std::vector<uint32_t> decode_utf8(std::string_view s) {
  std::vector<uint32_t> out;
  out.reserve(s.size());
  size_t i = 0;
  auto fail = [&](size_t at) -> void {
    throw Error("invalid UTF-8 at byte " + std::to_string(at));
  };
  while (i < s.size()) {
    unsigned char b0 = s[i];
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      fail(i);
      return out;  // unreachable
    }
    if (i + len > s.size()) fail(i);
    for (int k = 1; k < len; ++k) {
      unsigned char b = s[i + k];
      if ((b & 0xC0) != 0x80) fail(i + k);
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len]) fail(i);
    if (cp >= 0xD800 && cp <= 0xDFFF) fail(i);
    if (cp > 0x10FFFF) fail(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(const std::vector<uint32_t>& cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (uint32_t cp : cps) append_utf8(out, cp);
  return out;
}

inline int combining_class(uint32_t cp) {
  using unicode_data::kCcc;
  if (cp >= unicode_data::kTableLimit) return 0;
  auto it = std::lower_bound(std::begin(kCcc), std::end(kCcc), cp,
                             [](const unicode_data::CccEntry& e, uint32_t c) { return e.cp < c; });
  if (it != std::end(kCcc) && it->cp == cp) return it->ccc;
  return 0;
}

namespace detail {

inline void decompose_into(uint32_t cp, std::vector<uint32_t>& out) {
  using namespace unicode_data;
  if (cp < kTableLimit) {
    auto it = std::lower_bound(std::begin(kDecomp), std::end(kDecomp), cp,
                               [](const DecompEntry& e, uint32_t c) { return e.cp < c; });
    if (it != std::end(kDecomp) && it->cp == cp) {
      for (int k = 0; k < it->length; ++k) out.push_back(kDecompPool[it->offset + k]);
      return;
    }
  }
  out.push_back(cp);
}

inline uint32_t compose_pair(uint32_t a, uint32_t b) {
  using namespace unicode_data;
  auto it = std::lower_bound(std::begin(kComp), std::end(kComp), std::pair<uint32_t, uint32_t>(a, b),
                             [](const CompEntry& e, const std::pair<uint32_t, uint32_t>& p) {
                               return e.first != p.first ? e.first < p.first : e.second < p.second;
                             });
  if (it != std::end(kComp) && it->first == a && it->second == b) return it->composed;
  return 0;
}

}  // namespace detail

inline std::vector<uint32_t> nfc(const std::vector<uint32_t>& in) {
  // decompose
  std::vector<uint32_t> buf;
  buf.reserve(in.size() + 8);
  for (uint32_t cp : in) detail::decompose_into(cp, buf);

  // canonical ordering (stable exchange sort on combining class)
  for (size_t i = 1; i < buf.size(); ++i) {
    int ccc = combining_class(buf[i]);
    if (ccc == 0) continue;
    size_t j = i;
    while (j > 0 && combining_class(buf[j - 1]) > ccc) {
      std::swap(buf[j - 1], buf[j]);
      --j;
    }
  }

  // canonical composition
  std::vector<uint32_t> out;
  out.reserve(buf.size());
  ptrdiff_t last_starter = -1;
  for (uint32_t cp : buf) {
    int ccc = combining_class(cp);
    if (last_starter >= 0) {
      bool blocked;
      if (static_cast<size_t>(last_starter) == out.size() - 1) {
        blocked = false;
      } else {
        // marks between the starter and cp are in canonical order, so the
        // previous character carries the largest intervening class
        blocked = ccc == 0 || combining_class(out.back()) >= ccc;
      }
      if (!blocked) {
        uint32_t composed = detail::compose_pair(out[last_starter], cp);
        if (composed) {
          out[last_starter] = composed;
          continue;
        }
      }
    }
    out.push_back(cp);
    if (ccc == 0) last_starter = static_cast<ptrdiff_t>(out.size()) - 1;
  }
  return out;
}

inline std::string nfc(std::string_view s) { return encode_utf8(nfc(decode_utf8(s))); }

// Unicode White_Space code points (word separators for tokenization).
inline bool is_space(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_devanagari(uint32_t cp) { return cp >= 0x0900 && cp <= 0x097F; }

// Allowed-script rules for corpus cleaning.
enum class ScriptRule { devanagari_ascii, ascii, any };

inline const char* to_string(ScriptRule r) {
  switch (r) {
    case ScriptRule::devanagari_ascii: return "devanagari_ascii";
    case ScriptRule::ascii: return "ascii";
    case ScriptRule::any: return "any";
  }
  return "any";
}

inline ScriptRule script_rule_from_string(const std::string& s) {
  if (s == "devanagari_ascii") return ScriptRule::devanagari_ascii;
  if (s == "ascii") return ScriptRule::ascii;
  if (s == "any") return ScriptRule::any;
  throw Error("unknown script rule: " + s);
}

inline bool is_ascii_digit(uint32_t cp) { return cp >= '0' && cp <= '9'; }

inline bool is_ascii_punct(uint32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// devanagari_ascii admits the Devanagari block, ASCII digits/punctuation and
// the zero-width (non-)joiners that occur word-internally in Devanagari.
inline bool codepoint_allowed(uint32_t cp, ScriptRule rule) {
  switch (rule) {
    case ScriptRule::any:
      return true;
    case ScriptRule::ascii:
      return cp >= 0x20 && cp < 0x7F;
    case ScriptRule::devanagari_ascii:
      return is_devanagari(cp) || is_ascii_digit(cp) || is_ascii_punct(cp) ||
             cp == 0x200C || cp == 0x200D;
  }
  return false;
}

inline bool token_allowed(std::string_view token, ScriptRule rule) {
  if (rule == ScriptRule::any) return true;
  for (uint32_t cp : decode_utf8(token)) {
    if (!codepoint_allowed(cp, rule)) return false;
  }
  return true;
}

}  // namespace smtkit
