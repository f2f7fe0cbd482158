#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Emits three tables used by the tokenizer:
  - kAlnumRanges:  sorted, merged [lo,hi] ranges of code points in categories
                   L* (letters) or Nd (decimal digits)
  - kLowerRuns:    runs [lo,hi,delta] where lower(cp) == cp + delta, 1:1 only;
                   multi-codepoint lowerings are reduced to their first code
                   point so the map stays 1:1 and idempotent (asserted)
  - kSpaceCps:     code points treated as whitespace by the splitter
                   (str.isspace() plus U+0000, which must never survive into
                   a token)
"""

import sys
import unicodedata


def alnum(cp: int) -> bool:
    cat = unicodedata.category(chr(cp))
    return cat.startswith("L") or cat == "Nd"


def lower_of(cp: int) -> int:
    low = chr(cp).lower()
    return ord(low[0]) if low else cp


def main(out_path: str) -> None:
    max_cp = 0x110000

    ranges = []
    for cp in range(max_cp):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        if alnum(cp):
            if ranges and ranges[-1][1] == cp - 1:
                ranges[-1][1] = cp
            else:
                ranges.append([cp, cp])

    runs = []
    for cp in range(max_cp):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        lo = lower_of(cp)
        if lo == cp:
            continue
        assert lower_of(lo) == lo, f"non-idempotent lowering U+{cp:04X}"
        delta = lo - cp
        if runs and runs[-1][1] == cp - 1 and runs[-1][2] == delta:
            runs[-1][1] = cp
        else:
            runs.append([cp, cp, delta])

    spaces = [0x00] + [cp for cp in range(max_cp)
                       if not (0xD800 <= cp <= 0xDFFF) and chr(cp).isspace()]

    with open(out_path, "w") as f:
        f.write("// Generated by tools/gen_unicode_tables.py "
                f"(Unicode {unicodedata.unidata_version}). Do not edit.\n")
        f.write(f"inline constexpr CpRange kAlnumRanges[{len(ranges)}] = {{\n")
        for lo, hi in ranges:
            f.write(f"    {{0x{lo:X}, 0x{hi:X}}},\n")
        f.write("};\n")
        f.write(f"inline constexpr LowerRun kLowerRuns[{len(runs)}] = {{\n")
        for lo, hi, d in runs:
            f.write(f"    {{0x{lo:X}, 0x{hi:X}, {d}}},\n")
        f.write("};\n")
        f.write(f"inline constexpr char32_t kSpaceCps[{len(spaces)}] = {{\n")
        f.write("    " + ", ".join(f"0x{cp:X}" for cp in spaces) + ",\n")
        f.write("};\n")
    print(f"wrote {out_path}: {len(ranges)} alnum ranges, "
          f"{len(runs)} lower runs, {len(spaces)} space cps")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
