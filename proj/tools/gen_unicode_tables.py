#!/usr/bin/env python3
# Regenerates include/smtkit/unicode_data.hpp and tests/data/nfc_cases.tsv
# from the Python unicodedata database.
#
# The normalizer only needs full NFC coverage for code points below LIMIT
# (Latin/Greek/Cyrillic/Hebrew/Arabic/Indic incl. Devanagari); everything
# above passes through as an inert starter.

import random
import sys
import unicodedata
from pathlib import Path

LIMIT = 0x1000

HEADER = """\
// smtkit/unicode_data.hpp
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

// Generated by tools/gen_unicode_tables.py from Unicode %(uver)s data.
// Do not edit by hand.

#pragma once

#include <cstdint>

namespace smtkit::unicode_data {

inline constexpr uint32_t kTableLimit = 0x%(limit)X;
"""


def main() -> None:
    root = Path(__file__).resolve().parent.parent

    # cp -> full canonical decomposition (NFD of the single char)
    decomp = {}
    for cp in range(LIMIT):
        nfd = unicodedata.normalize("NFD", chr(cp))
        if nfd != chr(cp):
            decomp[cp] = [ord(x) for x in nfd]

    ccc = {}
    for cp in range(LIMIT):
        k = unicodedata.combining(chr(cp))
        if k:
            ccc[cp] = k

    # primary composites: two-element canonical decompositions that NFC
    # actually recomposes (this filters composition exclusions for free)
    comp = {}
    for cp in range(LIMIT):
        d = unicodedata.decomposition(chr(cp))
        if d and not d.startswith("<"):
            parts = [int(x, 16) for x in d.split()]
            if len(parts) == 2:
                a, b = parts
                if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
                    comp[(a, b)] = cp

    pool = []
    drows = []
    for cp in sorted(decomp):
        seq = decomp[cp]
        drows.append((cp, len(pool), len(seq)))
        pool.extend(seq)

    out = [HEADER % {"uver": unicodedata.unidata_version, "limit": LIMIT}]

    out.append("\nstruct DecompEntry { uint32_t cp; uint16_t offset; uint8_t length; };\n")
    out.append("inline constexpr DecompEntry kDecomp[] = {\n")
    for cp, off, n in drows:
        out.append(f"    {{0x{cp:04X}, {off}, {n}}},\n")
    out.append("};\n")

    out.append("\ninline constexpr uint32_t kDecompPool[] = {\n")
    for i in range(0, len(pool), 8):
        out.append("    " + ", ".join(f"0x{c:04X}" for c in pool[i : i + 8]) + ",\n")
    out.append("};\n")

    out.append("\nstruct CccEntry { uint32_t cp; uint8_t ccc; };\n")
    out.append("inline constexpr CccEntry kCcc[] = {\n")
    for cp in sorted(ccc):
        out.append(f"    {{0x{cp:04X}, {ccc[cp]}}},\n")
    out.append("};\n")

    out.append("\nstruct CompEntry { uint32_t first; uint32_t second; uint32_t composed; };\n")
    out.append("inline constexpr CompEntry kComp[] = {\n")
    for (a, b) in sorted(comp):
        out.append(f"    {{0x{a:04X}, 0x{b:04X}, 0x{comp[(a, b)]:04X}}},\n")
    out.append("};\n")

    out.append("\n}  // namespace smtkit::unicode_data\n")

    hpp = root / "include" / "smtkit" / "unicode_data.hpp"
    hpp.write_text("".join(out), encoding="utf-8")
    print(f"wrote {hpp}: {len(drows)} decompositions, {len(ccc)} ccc, {len(comp)} pairs")

    write_fixture(root)


def write_fixture(root: Path) -> None:
    # input/expected pairs, hex-encoded UTF-8 per column
    cases = []

    def add(s: str) -> None:
        n = unicodedata.normalize("NFC", s)
        assert unicodedata.normalize("NFC", n) == n
        cases.append((s, n))

    add("")
    add("hello, world 123")
    add("क़")              # ka + nukta: stays decomposed (qa excluded)
    add("क़")                    # qa: decomposes under NFC
    add("ऩ")                    # nnna: stays composed
    add("ऩ")              # na + nukta: composes to nnna
    add("क़्")        # virama/nukta need canonical reordering
    add("हिन्दी")   # hindii
    add("तो नाराज होता ।")
    add("café")
    add("café")
    add("ΐ")                    # iota with dialytika+tonos
    add("ΐ")
    add("ą́")             # acute + ogonek: reorder then compose
    add("ज़ड़ढ़")        # za dddha rha
    add("१२३")        # devanagari digits
    add("\U0001F600 के")   # astral passthrough + ke

    rng = random.Random(20260814)
    letters = [0x0915, 0x0916, 0x0928, 0x092C, 0x0930, 0x0932, 0x0939, 0x0905, 0x0906]
    marks = [0x093C, 0x093E, 0x093F, 0x0940, 0x0947, 0x094B, 0x094D, 0x0951, 0x0952, 0x0901, 0x0902]
    for _ in range(40):
        s = []
        for _ in range(rng.randint(1, 8)):
            s.append(chr(rng.choice(letters)))
            for _ in range(rng.randint(0, 3)):
                s.append(chr(rng.choice(marks)))
        add("".join(s))

    tsv = root / "tests" / "data" / "nfc_cases.tsv"
    with tsv.open("w", encoding="utf-8") as f:
        for raw, nfc in cases:
            f.write(raw.encode("utf-8").hex() + "\t" + nfc.encode("utf-8").hex() + "\n")
    print(f"wrote {tsv}: {len(cases)} cases")


if __name__ == "__main__":
    sys.exit(main())
