//! Matching names and relative paths against parsed patterns.

use crate::pattern::{CharClass, Pattern, Segment, SegmentKind, SegmentToken, SEPARATOR};

/// Semantic switches for matching. All default to `false`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MatchOptions {
    /// Give `**` segments their recursive meaning. When off, `**` acts like `*`.
    pub recursive: bool,
    pub case_insensitive: bool,
    /// Let wildcards match a leading `.` and let `**` enter hidden directories.
    pub include_hidden: bool,
    /// Only directories match. Also implied by a trailing separator in the pattern.
    pub directory_only: bool,
}

impl MatchOptions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn recursive() -> Self {
        Self {
            recursive: true,
            ..Self::default()
        }
    }
}

/// A relative path plus whether it names a directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidatePath<'a> {
    pub path: &'a str,
    pub is_directory: bool,
}

impl<'a> CandidatePath<'a> {
    pub fn file(path: &'a str) -> Self {
        Self {
            path,
            is_directory: false,
        }
    }

    pub fn dir(path: &'a str) -> Self {
        Self {
            path,
            is_directory: true,
        }
    }
}

/// Simple one-to-one lowercase mapping; characters whose lowercase form is
/// longer than one code point are left alone.
pub fn fold_char(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

fn upper_char(c: char) -> char {
    let mut upper = c.to_uppercase();
    match (upper.next(), upper.next()) {
        (Some(u), None) => u,
        _ => c,
    }
}

pub fn fold_case(text: &str) -> String {
    text.chars().map(fold_char).collect()
}

pub fn is_hidden(name: &str) -> bool {
    name.starts_with('.')
}

const STAR_ONLY: &[SegmentToken] = &[SegmentToken::Star];

/// Match a single path component against a segment.
pub fn match_segment(segment: &Segment, name: &str, options: &MatchOptions) -> bool {
    let mut comparisons = 0;
    match_segment_counted(segment, name, options, &mut comparisons)
}

/// [`match_segment`] that also adds the number of token-at-position
/// comparisons performed to `comparisons`.
///
/// Uses the two-pointer scheme that only ever backtracks to the most recent
/// `*`. Every other token has a fixed width, so the total work is bounded by
/// roughly `(name length + 2) * token count` comparisons.
pub fn match_segment_counted(
    segment: &Segment,
    name: &str,
    options: &MatchOptions,
    comparisons: &mut u64,
) -> bool {
    let tokens = match segment.kind() {
        SegmentKind::GlobStar => STAR_ONLY,
        _ => segment.tokens(),
    };
    if !options.include_hidden && is_hidden(name) {
        // Only a literal dot may match a leading dot.
        match tokens.first() {
            Some(SegmentToken::Literal(text)) if text.starts_with('.') => {}
            _ => return false,
        }
    }
    let name: Vec<char> = name.chars().collect();
    let ci = options.case_insensitive;

    let mut t = 0;
    let mut p = 0;
    // (token index after the last star, name position that star is resumed at)
    let mut resume: Option<(usize, usize)> = None;
    loop {
        if t < tokens.len() {
            if tokens[t] == SegmentToken::Star {
                if t + 1 == tokens.len() {
                    return true;
                }
                t += 1;
                resume = Some((t, p));
                continue;
            }
            *comparisons += 1;
            if let Some(width) = token_width_at(&tokens[t], &name, p, ci) {
                t += 1;
                p += width;
                continue;
            }
        } else if p == name.len() {
            return true;
        }
        match resume {
            Some((rt, rp)) if rp < name.len() => {
                resume = Some((rt, rp + 1));
                t = rt;
                p = rp + 1;
            }
            _ => return false,
        }
    }
}

/// Characters consumed when `token` matches at `name[pos..]`.
fn token_width_at(token: &SegmentToken, name: &[char], pos: usize, ci: bool) -> Option<usize> {
    match token {
        SegmentToken::Literal(text) => {
            let mut width = 0;
            for expected in text.chars() {
                let actual = *name.get(pos + width)?;
                let equal = if ci {
                    fold_char(expected) == fold_char(actual)
                } else {
                    expected == actual
                };
                if !equal {
                    return None;
                }
                width += 1;
            }
            Some(width)
        }
        SegmentToken::Question => (pos < name.len()).then_some(1),
        SegmentToken::Class(class) => {
            let c = *name.get(pos)?;
            class_matches(class, c, ci).then_some(1)
        }
        SegmentToken::Star => Some(0),
    }
}

fn class_matches(class: &CharClass, c: char, ci: bool) -> bool {
    let member = if ci {
        class.has_member(c) || class.has_member(fold_char(c)) || class.has_member(upper_char(c))
    } else {
        class.has_member(c)
    };
    member != class.is_negated()
}

/// Match a root-relative path against a whole pattern.
///
/// With `recursive` set, a `**` segment spans zero or more components that
/// are not hidden (unless `include_hidden`). A trailing `**` must span at
/// least one component, except for directory-only patterns where it may also
/// match the directory it follows. The empty path never matches.
pub fn match_path(pattern: &Pattern, candidate: CandidatePath<'_>, options: &MatchOptions) -> bool {
    let directory_only = options.directory_only || pattern.is_directory_only();
    if directory_only && !candidate.is_directory {
        return false;
    }
    let components: Vec<&str> = candidate
        .path
        .split(SEPARATOR)
        .filter(|c| !c.is_empty())
        .collect();
    if components.is_empty() {
        return false;
    }
    let segments = effective_segments(pattern, options);
    let mut matcher = PathMatcher {
        segments: &segments,
        components: &components,
        options,
        directory_only,
        memo: vec![None; (segments.len() + 1) * (components.len() + 1)],
    };
    matcher.matches_from(0, 0)
}

/// Pattern segments with runs of `**` collapsed when recursion is on; the
/// collapsed form matches exactly the same paths.
pub(crate) fn effective_segments<'p>(
    pattern: &'p Pattern,
    options: &MatchOptions,
) -> Vec<&'p Segment> {
    let mut out: Vec<&Segment> = Vec::with_capacity(pattern.segments().len());
    for segment in pattern.segments() {
        let repeated_globstar = options.recursive
            && segment.kind() == SegmentKind::GlobStar
            && out
                .last()
                .is_some_and(|s| s.kind() == SegmentKind::GlobStar);
        if !repeated_globstar {
            out.push(segment);
        }
    }
    out
}

struct PathMatcher<'a> {
    segments: &'a [&'a Segment],
    components: &'a [&'a str],
    options: &'a MatchOptions,
    directory_only: bool,
    memo: Vec<Option<bool>>,
}

impl PathMatcher<'_> {
    fn matches_from(&mut self, si: usize, ci: usize) -> bool {
        let key = si * (self.components.len() + 1) + ci;
        if let Some(known) = self.memo[key] {
            return known;
        }
        let result = self.compute(si, ci);
        self.memo[key] = Some(result);
        result
    }

    fn compute(&mut self, si: usize, ci: usize) -> bool {
        let total = self.components.len();
        let Some(segment) = self.segments.get(si) else {
            return ci == total;
        };
        if segment.kind() == SegmentKind::GlobStar && self.options.recursive {
            let visible = |c: &&str| self.options.include_hidden || !is_hidden(c);
            if si + 1 == self.segments.len() {
                return if ci == total {
                    self.directory_only && ci > 0
                } else {
                    self.components[ci..].iter().all(visible)
                };
            }
            if self.matches_from(si + 1, ci) {
                return true;
            }
            return ci < total && visible(&self.components[ci]) && self.matches_from(si, ci + 1);
        }
        ci < total
            && match_segment(segment, self.components[ci], self.options)
            && self.matches_from(si + 1, ci + 1)
    }
}
