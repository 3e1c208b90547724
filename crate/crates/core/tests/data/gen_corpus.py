#!/usr/bin/env python3
"""Regenerate corpus.tsv from CPython's glob module.

Each row is (pattern, flags, path, kind, expected, source). Flags: r =
recursive, h = include hidden, i = case-insensitive, '-' = none. Kind is f
(file) or d (directory). Rows with source "ref" are computed by globbing a
fixture tree with the reference implementation; rows with source "decided"
are fixed by hand where this library deliberately differs.

    python3 gen_corpus.py > corpus.tsv
"""

import contextlib
import glob
import os
import sys
import tempfile

FILES = [
    "data_1.csv", "data_2.csv", "data_10.csv", "data_a.csv", "data_b.csv",
    "data.csv", "data.tsv", "data.psv", "data_.csv",
    "exp01.csv", "exp02.csv", "exp1.csv", "expAB.csv",
    "app.log", "App.log", "9app.log",
    "z.csv", "a/x.csv", "a/b/y.csv", "a/b/c/deep.csv",
    "src/main.py", "src/m/a.py", "src/m/n/b.py", "lib/a.py",
    "img/cat.jpg", "img/dog.jpeg", "img/x.png", "img/y.gif", "img/sub/z.PNG", "top.jpg",
    "file[1].txt", "file1.txt", "a*b?c",
    ".hidden", ".config/settings.json", "a/.secret.csv", ".git/objects/o.csv",
    "sales_2024_01_05_east.csv", "sales_2024_01_06_west.csv", "sales_2024_02_01_east.csv",
    "README.MD", "notes.txt", "caret^.txt", "dash-.txt", "bracket].txt", "]odd.txt", "plaintxt",
]
DIRS = sorted({"/".join(f.split("/")[:k]) for f in FILES for k in range(1, f.count("/") + 1)})

CASES = [
    ("*.csv", "-", ["z.csv", "data_1.csv", "a/x.csv", "data.tsv", "a/.secret.csv"]),
    ("data_*.csv", "-", ["data_1.csv", "data_10.csv", "data_.csv", "data.csv", "a/x.csv"]),
    ("data_?.csv", "-", ["data_1.csv", "data_a.csv", "data_10.csv", "data_.csv"]),
    ("data_??.csv", "-", ["data_10.csv", "data_1.csv"]),
    ("**/*.csv", "r", ["z.csv", "a/x.csv", "a/b/y.csv", "a/b/c/deep.csv", "a/.secret.csv",
                       ".git/objects/o.csv", "data.tsv"]),
    ("**/*.csv", "-", ["z.csv", "a/x.csv", "a/b/y.csv"]),
    ("**/*.csv", "rh", ["a/.secret.csv", ".git/objects/o.csv", "z.csv"]),
    ("src/**/*.py", "r", ["src/main.py", "src/m/a.py", "src/m/n/b.py", "lib/a.py"]),
    ("src/**/*.py", "-", ["src/main.py", "src/m/a.py", "src/m/n/b.py"]),
    ("**/*.{jpg,jpeg,png}", "r", ["img/cat.jpg", "img/dog.jpeg", "img/x.png", "img/y.gif",
                                  "img/sub/z.PNG", "top.jpg"]),
    ("**/*.{jpg,jpeg,png}", "ri", ["img/sub/z.PNG", "img/y.gif"]),
    ("data.[ct]sv", "-", ["data.csv", "data.tsv", "data.psv"]),
    ("exp[0-9][0-9].csv", "-", ["exp01.csv", "exp02.csv", "exp1.csv", "expAB.csv"]),
    ("[a-z]*.log", "-", ["app.log", "App.log", "9app.log"]),
    ("[a-z]*.log", "i", ["app.log", "App.log", "9app.log"]),
    ("[!a-z]*.log", "-", ["app.log", "App.log", "9app.log"]),
    (glob.escape("file[1].txt"), "-", ["file[1].txt", "file1.txt"]),
    ("file[1].txt", "-", ["file[1].txt", "file1.txt"]),
    (glob.escape("a*b?c"), "-", ["a*b?c"]),
    ("*", "-", [".hidden", "z.csv", "a", ".config"]),
    ("*", "h", [".hidden", ".config"]),
    (".*", "-", [".hidden", ".config", "z.csv"]),
    ("?hidden", "h", [".hidden"]),
    ("**", "r", ["a", "a/b", "a/b/c/deep.csv", ".config", ".hidden"]),
    ("**/", "r", ["a", "a/b", "src/m/n", ".git"]),
    ("*/", "-", ["a", "img", ".git", "z.csv"]),
    ("*/*/", "-", ["a/b", "src/m", "a/x.csv"]),
    ("a/*", "-", ["a/x.csv", "a/b", "a/.secret.csv"]),
    ("a/*/*.csv", "-", ["a/b/y.csv", "a/x.csv"]),
    ("*/**/*.py", "r", ["src/main.py", "src/m/n/b.py", "lib/a.py"]),
    ("**/b/*", "r", ["a/b/y.csv", "a/b/c", "src/m/n/b.py"]),
    ("**/n/*.py", "r", ["src/m/n/b.py"]),
    ("README.md", "i", ["README.MD"]),
    ("readme.md", "-", ["README.MD"]),
    ("*.MD", "-", ["README.MD"]),
    ("sales_2024_01_*.csv", "-", ["sales_2024_01_05_east.csv", "sales_2024_01_06_west.csv",
                                  "sales_2024_02_01_east.csv"]),
    ("[]]*", "-", ["]odd.txt", "bracket].txt", "data.csv"]),
    ("*[-]*", "-", ["dash-.txt", "data_1.csv"]),
    ("*[^]*", "-", ["caret^.txt", "app.log"]),
    ("*[!.]txt", "-", ["plaintxt", "notes.txt", "dash-.txt"]),
    ("a[", "-", ["a/x.csv"]),
    ("img/*.[!j]*", "-", ["img/x.png", "img/y.gif", "img/cat.jpg"]),
    ("*/*.*", "-", ["a/x.csv", "src/main.py", "a/.secret.csv"]),
    ("a/b/c/deep.csv", "-", ["a/b/c/deep.csv"]),
    ("a/b/c/nope.csv", "-", ["a/b/c/deep.csv"]),
    ("exp??.csv", "-", ["exp01.csv", "expAB.csv", "exp1.csv"]),
    ("*a*a*", "-", ["data.csv", "data_a.csv", "app.log"]),
]

# Where the library intentionally differs from the reference (which lists
# `a/` itself for `a/**`).
DECIDED = [
    ("a/**", "r", "a", "d", 0),
    ("a/**", "r", "a/b", "d", 1),
    ("a/**", "r", "a/b/c/deep.csv", "f", 1),
    ("a/**/", "r", "a", "d", 1),
    ("**/*.{csv,json}", "r", "z.csv", "f", 1),
    ("{a,src}/*.{csv,py}", "-", "src/main.py", "f", 1),
]


def expand(pattern):
    start = pattern.find("{")
    if start < 0:
        return [pattern]
    depth = 0
    for end in range(start, len(pattern)):
        if pattern[end] == "{":
            depth += 1
        elif pattern[end] == "}":
            depth -= 1
            if depth == 0:
                break
    body = pattern[start + 1:end]
    alts, depth, last = [], 0, 0
    for k, ch in enumerate(body):
        depth += ch == "{"
        depth -= ch == "}"
        if ch == "," and depth == 0:
            alts.append(body[last:k])
            last = k + 1
    alts.append(body[last:])
    out = []
    for alt in alts:
        out.extend(expand(pattern[:start] + alt + pattern[end + 1:]))
    return out


@contextlib.contextmanager
def hidden_included(enabled):
    original = glob._ishidden
    if enabled:
        glob._ishidden = lambda _: False
    try:
        yield
    finally:
        glob._ishidden = original


def build(root, lower):
    fix = (lambda p: p.lower()) if lower else (lambda p: p)
    for d in DIRS:
        os.makedirs(os.path.join(root, fix(d)), exist_ok=True)
    for f in FILES:
        with open(os.path.join(root, fix(f)), "w"):
            pass


def reference(root, pattern, flags):
    with hidden_included("h" in flags):
        found = set()
        for p in expand(pattern):
            found.update(x.rstrip("/") for x in glob.glob(p, root_dir=root, recursive="r" in flags))
        return found


def main():
    rows = []
    with tempfile.TemporaryDirectory() as plain, tempfile.TemporaryDirectory() as lower:
        build(plain, False)
        build(lower, True)
        dirs = set(DIRS)
        for pattern, flags, paths in CASES:
            if "i" in flags:
                found = reference(lower, pattern.lower(), flags)
            else:
                found = reference(plain, pattern, flags)
            for path in paths:
                assert path in FILES or path in dirs, path
                probe = path.lower() if "i" in flags else path
                kind = "d" if path in dirs else "f"
                rows.append((pattern, flags, path, kind, int(probe in found), "ref"))
    for row in DECIDED:
        rows.append(row + ("decided",))
    out = sys.stdout
    out.write("# pattern\tflags\tpath\tkind\texpected\tsource\n")
    for row in rows:
        out.write("\t".join(str(x) for x in row) + "\n")


if __name__ == "__main__":
    main()
