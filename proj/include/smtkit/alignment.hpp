// smtkit/alignment.hpp
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
#include <cstdlib>
#include <set>
#include <string>
#include <utility>

#include "smtkit/util.hpp"

namespace smtkit {

// Word links for one sentence pair, (source index, target index) oriented.
// A target index with no link is NULL-aligned.
struct AlignmentLinkSet {
  uint64_t pair_id = 0;
  std::set<std::pair<uint32_t, uint32_t>> links;
};

// Swaps link orientation (used to bring a reverse-direction alignment into
// (source, target) order before symmetrizing).
inline AlignmentLinkSet transpose(const AlignmentLinkSet& a) {
  AlignmentLinkSet out;
  out.pair_id = a.pair_id;
  for (const auto& [i, j] : a.links) out.links.emplace(j, i);
  return out;
}

enum class Symmetrization { intersection, union_, grow_diag };

inline const char* to_string(Symmetrization h) {
  switch (h) {
    case Symmetrization::intersection: return "intersection";
    case Symmetrization::union_: return "union";
    case Symmetrization::grow_diag: return "grow_diag";
  }
  return "?";
}

inline Symmetrization symmetrization_from_string(const std::string& s) {
  if (s == "intersection") return Symmetrization::intersection;
  if (s == "union") return Symmetrization::union_;
  if (s == "grow_diag") return Symmetrization::grow_diag;
  throw Error("unknown symmetrization heuristic: " + s);
}

// Both inputs must already be (source, target) oriented and refer to the
// same pair. grow_diag starts from the intersection and keeps adopting union
// links that touch an existing link (8-neighborhood) and bring a new source
// or target index, scanning row-major until fixpoint.
inline AlignmentLinkSet symmetrize(const AlignmentLinkSet& forward,
                                   const AlignmentLinkSet& reverse,
                                   Symmetrization heuristic) {
  if (forward.pair_id != reverse.pair_id)
    throw Error("symmetrize: pair id mismatch " + std::to_string(forward.pair_id) + " vs " +
                std::to_string(reverse.pair_id));
  AlignmentLinkSet out;
  out.pair_id = forward.pair_id;

  if (heuristic == Symmetrization::union_) {
    out.links = forward.links;
    out.links.insert(reverse.links.begin(), reverse.links.end());
    return out;
  }

  for (const auto& link : forward.links)
    if (reverse.links.count(link)) out.links.insert(link);
  if (heuristic == Symmetrization::intersection) return out;

  std::set<std::pair<uint32_t, uint32_t>> union_links = forward.links;
  union_links.insert(reverse.links.begin(), reverse.links.end());

  std::set<uint32_t> src_linked, tgt_linked;
  for (const auto& [i, j] : out.links) {
    src_linked.insert(i);
    tgt_linked.insert(j);
  }
  auto adjacent = [&](uint32_t i, uint32_t j) {
    for (const auto& [a, b] : out.links) {
      int64_t di = std::llabs(static_cast<int64_t>(a) - i);
      int64_t dj = std::llabs(static_cast<int64_t>(b) - j);
      if (di <= 1 && dj <= 1) return true;
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [i, j] : union_links) {
      if (out.links.count({i, j})) continue;
      if (src_linked.count(i) && tgt_linked.count(j)) continue;
      if (!adjacent(i, j)) continue;
      out.links.emplace(i, j);
      src_linked.insert(i);
      tgt_linked.insert(j);
      changed = true;
    }
  }
  return out;
}

}  // namespace smtkit
