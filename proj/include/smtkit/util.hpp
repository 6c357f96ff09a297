// smtkit/util.hpp
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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smtkit {

// Single exception type for all data/usage failures; the message carries the
// location (line number, byte offset) where one applies.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 14695981039346656037ull) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed: " + path);
}

inline bool file_exists(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return static_cast<bool>(in);
}

// Splits file contents into lines on LF; a trailing newline does not produce
// an extra empty line. Tolerates CR before LF.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    size_t end = nl;
    if (end > start && text[end - 1] == '\r') --end;
    lines.emplace_back(text.substr(start, end - start));
    start = nl + 1;
  }
  return lines;
}

inline std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

// Compares token sequences as if joined with single spaces, so ties resolve
// on the rendered string.
template <typename Seq>
inline bool joined_less(const Seq& a, const Seq& b) {
  size_t ka = 0, kb = 0, pa = 0, pb = 0;
  while (true) {
    bool ea = ka == a.size(), eb = kb == b.size();
    if (ea || eb) return !ea ? false : !eb;
    char ca = pa < a[ka].size() ? a[ka][pa] : ' ';
    char cb = pb < b[kb].size() ? b[kb][pb] : ' ';
    if (ca != cb) return static_cast<unsigned char>(ca) < static_cast<unsigned char>(cb);
    if (pa < a[ka].size()) {
      ++pa;
    } else {
      ++ka;
      pa = 0;
    }
    if (pb < b[kb].size()) {
      ++pb;
    } else {
      ++kb;
      pb = 0;
    }
  }
}

inline std::vector<std::string> split_on(std::string_view s, std::string_view delim) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + delim.size();
  }
  return out;
}

template <typename Seq>
inline std::string join(const Seq& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& it : items) {
    if (!first) out.append(sep);
    out.append(it);
    first = false;
  }
  return out;
}

// %.Ng formatting; 17 significant digits round-trips a double exactly.
inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw Error("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw Error("malformed number in " + what + ": '" + s + "'");
  }
}

inline uint64_t parse_uint(const std::string& s, const std::string& what) {
  if (s.empty()) throw Error("malformed id, " + what);
  for (char c : s) {
    if (c < '0' || c > '9') throw Error("malformed id, " + what);
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error("malformed id, " + what);
  }
}

}  // namespace smtkit
