//! Shared helpers for the integration tests: a deliberately naive reference
//! matcher working directly on pattern text, plus random tree and pattern
//! generators.

#![allow(dead_code)]

use globcraft::{expand_braces, match_path, parse_pattern, CandidatePath, MatchOptions, MemoryFs};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------------------
// Recorded corpus (tests/data/corpus.tsv, regenerated by gen_corpus.py)
// ---------------------------------------------------------------------------

pub struct Row {
    pub pattern: String,
    pub options: MatchOptions,
    pub path: String,
    pub is_dir: bool,
    pub expected: bool,
}

pub fn load() -> Vec<Row> {
    let text = include_str!("../data/corpus.tsv");
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            assert_eq!(f.len(), 6, "bad corpus line: {line}");
            Row {
                pattern: f[0].to_owned(),
                options: MatchOptions {
                    recursive: f[1].contains('r'),
                    include_hidden: f[1].contains('h'),
                    case_insensitive: f[1].contains('i'),
                    directory_only: false,
                },
                path: f[2].to_owned(),
                is_dir: f[3] == "d",
                expected: f[4] == "1",
            }
        })
        .collect()
}

pub fn row_matches(row: &Row) -> bool {
    let candidate = CandidatePath {
        path: &row.path,
        is_directory: row.is_dir,
    };
    expand_braces(&row.pattern)
        .unwrap()
        .iter()
        .any(|p| match_path(&parse_pattern(p).unwrap(), candidate, &row.options))
}

// ---------------------------------------------------------------------------
// Reference matcher
// ---------------------------------------------------------------------------

fn lower(c: char) -> char {
    let s: Vec<char> = c.to_lowercase().collect();
    if s.len() == 1 {
        s[0]
    } else {
        c
    }
}

fn upper(c: char) -> char {
    let s: Vec<char> = c.to_uppercase().collect();
    if s.len() == 1 {
        s[0]
    } else {
        c
    }
}

struct Class {
    negated: bool,
    singles: Vec<char>,
    ranges: Vec<(char, char)>,
}

impl Class {
    fn member(&self, c: char) -> bool {
        self.singles.contains(&c) || self.ranges.iter().any(|&(lo, hi)| lo <= c && c <= hi)
    }

    fn matches(&self, c: char, ci: bool) -> bool {
        let hit = if ci {
            self.member(c) || self.member(lower(c)) || self.member(upper(c))
        } else {
            self.member(c)
        };
        hit ^ self.negated
    }
}

/// Class starting at `pat[0] == '['`; returns it and the number of pattern
/// characters it spans, or `None` if the bracket is never closed.
fn read_class(pat: &[char]) -> Option<(Class, usize)> {
    let mut i = 1;
    let negated = pat.get(1) == Some(&'!');
    if negated {
        i = 2;
    }
    // first character after the opener is always a member, even `]`
    let close = (i + 1..pat.len()).find(|&k| pat[k] == ']')?;
    let body = &pat[i..close];
    let mut class = Class {
        negated,
        singles: Vec::new(),
        ranges: Vec::new(),
    };
    let mut k = 0;
    while k < body.len() {
        if k + 2 < body.len() && body[k + 1] == '-' {
            assert!(
                body[k] <= body[k + 2],
                "generator produced a reversed range"
            );
            class.ranges.push((body[k], body[k + 2]));
            k += 3;
        } else {
            class.singles.push(body[k]);
            k += 1;
        }
    }
    Some((class, close + 1))
}

/// Exponential backtracking match of one component against one pattern
/// segment. Leading-dot handling is done by the caller.
fn segment_rec(pat: &[char], name: &[char], ci: bool) -> bool {
    let Some(&first) = pat.first() else {
        return name.is_empty();
    };
    match first {
        '*' => {
            segment_rec(&pat[1..], name, ci)
                || (!name.is_empty() && segment_rec(pat, &name[1..], ci))
        }
        '?' => !name.is_empty() && segment_rec(&pat[1..], &name[1..], ci),
        '[' => match read_class(pat) {
            Some((class, width)) => {
                !name.is_empty()
                    && class.matches(name[0], ci)
                    && segment_rec(&pat[width..], &name[1..], ci)
            }
            None => literal_step(pat, name, ci),
        },
        _ => literal_step(pat, name, ci),
    }
}

fn literal_step(pat: &[char], name: &[char], ci: bool) -> bool {
    let Some(&c) = name.first() else { return false };
    let same = if ci {
        lower(pat[0]) == lower(c)
    } else {
        pat[0] == c
    };
    same && segment_rec(&pat[1..], &name[1..], ci)
}

pub fn oracle_segment(segment: &str, name: &str, options: &MatchOptions) -> bool {
    if name.starts_with('.') && !options.include_hidden && !segment.starts_with('.') {
        return false;
    }
    let pat: Vec<char> = segment.chars().collect();
    let name: Vec<char> = name.chars().collect();
    segment_rec(&pat, &name, options.case_insensitive)
}

/// Does `path` match the (brace-free) pattern text?
pub fn oracle_match(pattern: &str, path: &str, is_dir: bool, options: &MatchOptions) -> bool {
    let dir_only = options.directory_only || pattern.ends_with('/');
    if dir_only && !is_dir {
        return false;
    }
    let segs: Vec<&str> = pattern.split('/').filter(|s| !s.is_empty()).collect();
    let comps: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    if comps.is_empty() {
        return false;
    }
    path_rec(&segs, &comps, 0, options, dir_only)
}

fn path_rec(
    segs: &[&str],
    comps: &[&str],
    consumed: usize,
    options: &MatchOptions,
    dir_only: bool,
) -> bool {
    let Some((&seg, rest)) = segs.split_first() else {
        return comps.is_empty();
    };
    if seg == "**" && options.recursive {
        let visible = |c: &str| options.include_hidden || !c.starts_with('.');
        // try every number of spanned components
        for k in 0..=comps.len() {
            if k > 0 && !visible(comps[k - 1]) {
                break;
            }
            if rest.is_empty() {
                let ok = if k == comps.len() {
                    k > 0 || (dir_only && consumed > 0)
                } else {
                    false
                };
                if ok {
                    return true;
                }
            } else if path_rec(rest, &comps[k..], consumed + k, options, dir_only) {
                return true;
            }
        }
        return false;
    }
    match comps.split_first() {
        Some((&c, more)) => {
            oracle_segment(seg, c, options) && path_rec(rest, more, consumed + 1, options, dir_only)
        }
        None => false,
    }
}

/// Reference glob: every entry of the tree that matches any alternative.
pub fn oracle_glob(
    alternatives: &[String],
    entries: &[(String, bool)],
    options: &MatchOptions,
) -> Vec<String> {
    let mut out: Vec<String> = entries
        .iter()
        .filter(|(path, is_dir)| {
            alternatives
                .iter()
                .any(|a| oracle_match(a, path, *is_dir, options))
        })
        .map(|(path, _)| path.clone())
        .collect();
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

const NAME_CHARS: &[char] = &['a', 'b', 'B', '.', '_'];

pub fn random_name<R: Rng>(rng: &mut R) -> String {
    loop {
        let len = rng.gen_range(1..=3);
        let name: String = (0..len).map(|_| *NAME_CHARS.choose(rng).unwrap()).collect();
        if name != "." && name != ".." {
            return name;
        }
    }
}

/// A random tree of at most `max_entries` entries and `max_depth` levels.
/// Returns the filesystem and its `(path, is_dir)` entries.
pub fn random_tree<R: Rng>(
    rng: &mut R,
    max_depth: usize,
    max_entries: usize,
) -> (MemoryFs, Vec<(String, bool)>) {
    let mut fs = MemoryFs::new();
    let mut entries: Vec<(String, bool)> = Vec::new();
    let mut dirs: Vec<(String, usize)> = vec![(String::new(), 0)];
    let target = rng.gen_range(1..=max_entries);
    let mut attempts = 0;
    while entries.len() < target && attempts < max_entries * 10 {
        attempts += 1;
        let (parent, depth) = dirs.choose(rng).unwrap().clone();
        if depth >= max_depth {
            continue;
        }
        let name = random_name(rng);
        let path = if parent.is_empty() {
            name
        } else {
            format!("{parent}/{name}")
        };
        if entries.iter().any(|(p, _)| *p == path) {
            continue;
        }
        if rng.gen_bool(0.4) {
            fs.add_dir(&path);
            dirs.push((path.clone(), depth + 1));
            entries.push((path, true));
        } else {
            fs.add_file(
                &path,
                rng.gen_range(0..5000),
                rng.gen_range(0..2_000_000_000),
            );
            entries.push((path, false));
        }
    }
    entries.sort();
    (fs, entries)
}

const ATOMS: &[&str] = &[
    "a", "b", "B", ".", "_", "*", "*", "?", "[ab]", "[!a]", "[a-b]", "[]a]", "[!.]", "[.]",
    "[A-Z]", "[_B]", "[*]",
];

fn random_atoms<R: Rng>(rng: &mut R, max: usize, allow_open_bracket: bool) -> String {
    let n = rng.gen_range(1..=max);
    let mut s = String::new();
    for _ in 0..n {
        if allow_open_bracket && rng.gen_bool(0.03) {
            s.push('[');
        } else {
            s.push_str(ATOMS.choose(rng).unwrap());
        }
    }
    s
}

/// A random pattern and the alternatives its braces expand to, computed from
/// the structure that was generated rather than by parsing.
#[derive(Debug, Clone)]
pub struct GeneratedPattern {
    pub source: String,
    pub alternatives: Vec<String>,
}

enum Piece {
    Text(String),
    Group(Vec<String>),
}

/// A random pattern. Segments that are exactly `.` or `..` are never
/// produced: they navigate rather than name an entry, so a listing-based
/// reference cannot model them.
pub fn random_pattern<R: Rng>(rng: &mut R) -> GeneratedPattern {
    loop {
        let g = random_pattern_any(rng);
        let navigates = g
            .alternatives
            .iter()
            .any(|a| a.split('/').any(|s| s == "." || s == ".."));
        if !navigates {
            return g;
        }
    }
}

fn random_pattern_any<R: Rng>(rng: &mut R) -> GeneratedPattern {
    let with_braces = rng.gen_bool(0.25);
    let nsegs = rng.gen_range(1..=4);
    let mut pieces: Vec<Piece> = Vec::new();
    for i in 0..nsegs {
        if i > 0 {
            pieces.push(Piece::Text("/".to_owned()));
        }
        if rng.gen_bool(0.2) {
            pieces.push(Piece::Text("**".to_owned()));
            continue;
        }
        pieces.push(Piece::Text(random_atoms(rng, 4, !with_braces)));
        if with_braces && rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=3);
            pieces.push(Piece::Group(
                (0..k).map(|_| random_atoms(rng, 2, false)).collect(),
            ));
        }
    }
    if rng.gen_bool(0.1) {
        pieces.push(Piece::Text("/".to_owned()));
    }
    let mut source = String::new();
    let mut alternatives = vec![String::new()];
    for piece in &pieces {
        let options: Vec<&String> = match piece {
            Piece::Text(text) => {
                source.push_str(text);
                vec![text]
            }
            Piece::Group(alts) => {
                source.push('{');
                source.push_str(&alts.join(","));
                source.push('}');
                alts.iter().collect()
            }
        };
        alternatives = alternatives
            .iter()
            .flat_map(|prefix| options.iter().map(move |alt| format!("{prefix}{alt}")))
            .collect();
    }
    GeneratedPattern {
        source,
        alternatives,
    }
}

pub fn random_options<R: Rng>(rng: &mut R) -> MatchOptions {
    MatchOptions {
        recursive: rng.gen_bool(0.7),
        case_insensitive: rng.gen_bool(0.25),
        include_hidden: rng.gen_bool(0.3),
        directory_only: rng.gen_bool(0.1),
    }
}
