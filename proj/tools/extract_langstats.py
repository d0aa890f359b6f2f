#!/usr/bin/env python3
"""Extract lowercase trigram counts over the 27-symbol alphabet from
langdetect language profiles (Apache-2.0, https://github.com/Mimino666/langdetect).

Usage: extract_langstats.py <langdetect/profiles dir> <output dir> [codes...]

Each output file <code>.tsv holds one "<trigram>\t<count>" line per trigram,
sorted by trigram. Trigrams containing characters outside a-z and space are
dropped.
"""
import json
import os
import sys

ALPHABET = set("abcdefghijklmnopqrstuvwxyz ")
DEFAULT_CODES = ("ca cs da de en es et fi fr hr hu it lt lv nl pl pt ro sk sl sv").split()


def main():
    src, dst = sys.argv[1], sys.argv[2]
    codes = sys.argv[3:] or DEFAULT_CODES
    os.makedirs(dst, exist_ok=True)
    for code in codes:
        with open(os.path.join(src, code), encoding="utf-8") as f:
            profile = json.load(f)
        counts = {}
        for gram, freq in profile["freq"].items():
            low = gram.lower()
            if len(low) != 3 or not set(low) <= ALPHABET:
                continue
            counts[low] = counts.get(low, 0) + int(freq)
        with open(os.path.join(dst, code + ".tsv"), "w", encoding="ascii") as out:
            for gram in sorted(counts):
                out.write(f"{gram}\t{counts[gram]}\n")
        print(code, len(counts))


if __name__ == "__main__":
    main()
