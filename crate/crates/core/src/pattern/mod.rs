//! Glob pattern grammar.
//!
//! A pattern is split on `/` into segments before any token is recognised,
//! so no token can ever contain a separator. Within a segment:
//!
//! | syntax    | meaning                                             |
//! |-----------|-----------------------------------------------------|
//! | `*`       | any run of characters, including the empty run      |
//! | `?`       | exactly one character                               |
//! | `[seq]`   | one character in `seq` (`a-z` ranges allowed)       |
//! | `[!seq]`  | one character not in `seq`                          |
//! | `**`      | zero or more whole path components (segment only)   |
//!
//! `]` directly after the opening `[` (or `[!`) is a class member, and an
//! unterminated `[` is an ordinary character. Brace sets are handled by a
//! separate textual pass, see [`expand_braces`].

mod braces;

use std::fmt;

use thiserror::Error;

pub use braces::expand_braces;

/// Canonical path separator used by patterns and by every reported path.
pub const SEPARATOR: char = '/';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("invalid range `{lo}-{hi}` in character class at byte {offset}")]
    InvalidRange { lo: char, hi: char, offset: usize },
    #[error("unbalanced `{brace}` at byte {offset}")]
    UnbalancedBrace { brace: char, offset: usize },
}

/// A parsed glob pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    source: String,
    anchored: bool,
    segments: Vec<Segment>,
    directory_only: bool,
}

impl Pattern {
    pub fn new(source: &str) -> Result<Self, PatternError> {
        parse_pattern(source)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when the pattern starts at the filesystem root.
    pub fn is_anchored(&self) -> bool {
        self.anchored
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// True when the source ends with a separator; only directories match.
    pub fn is_directory_only(&self) -> bool {
        self.directory_only
    }

    /// Number of leading segments that are plain literals.
    pub fn literal_prefix_len(&self) -> usize {
        self.segments
            .iter()
            .take_while(|s| s.kind == SegmentKind::Literal)
            .count()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.anchored {
            f.write_str("/")?;
        }
        for (i, segment) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{segment}")?;
        }
        if self.directory_only && !self.segments.is_empty() {
            f.write_str("/")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// Only literal text; resolvable with an existence probe.
    Literal,
    Wildcard,
    /// The segment was exactly `**`.
    GlobStar,
}

/// One `/`-delimited piece of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    kind: SegmentKind,
    tokens: Vec<SegmentToken>,
}

impl Segment {
    pub fn globstar() -> Self {
        Self {
            kind: SegmentKind::GlobStar,
            tokens: Vec::new(),
        }
    }

    pub fn kind(&self) -> SegmentKind {
        self.kind
    }

    /// Tokens of the segment; empty for [`SegmentKind::GlobStar`].
    pub fn tokens(&self) -> &[SegmentToken] {
        &self.tokens
    }

    /// The literal text of a [`SegmentKind::Literal`] segment.
    pub fn literal_text(&self) -> Option<&str> {
        match (self.kind, self.tokens.as_slice()) {
            (SegmentKind::Literal, [SegmentToken::Literal(text)]) => Some(text),
            _ => None,
        }
    }

    fn from_tokens(tokens: Vec<SegmentToken>) -> Self {
        let kind = if tokens.iter().all(|t| matches!(t, SegmentToken::Literal(_))) {
            SegmentKind::Literal
        } else {
            SegmentKind::Wildcard
        };
        Self { kind, tokens }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == SegmentKind::GlobStar {
            return f.write_str("**");
        }
        for token in &self.tokens {
            write!(f, "{token}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentToken {
    /// Non-empty run of characters matched verbatim.
    Literal(String),
    Star,
    Question,
    Class(CharClass),
}

impl fmt::Display for SegmentToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentToken::Literal(text) => f.write_str(&escape(text)),
            SegmentToken::Star => f.write_str("*"),
            SegmentToken::Question => f.write_str("?"),
            SegmentToken::Class(class) => write!(f, "{class}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassItem {
    Char(char),
    /// Inclusive code-point range, `lo <= hi`.
    Range(char, char),
}

impl ClassItem {
    pub fn contains(&self, c: char) -> bool {
        match *self {
            ClassItem::Char(x) => x == c,
            ClassItem::Range(lo, hi) => lo <= c && c <= hi,
        }
    }
}

/// A bracket expression, `[...]` or `[!...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharClass {
    negated: bool,
    items: Vec<ClassItem>,
}

impl CharClass {
    pub fn new(negated: bool, items: Vec<ClassItem>) -> Self {
        Self { negated, items }
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn items(&self) -> &[ClassItem] {
        &self.items
    }

    /// Membership of `c` in the item set, ignoring negation.
    pub fn has_member(&self, c: char) -> bool {
        self.items.iter().any(|item| item.contains(c))
    }
}

impl fmt::Display for CharClass {
    // `]` must come first, `-` last, and `!` may not open a plain class. Range
    // bounds that are one of those characters are split off as single items.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const AWKWARD: [char; 3] = ['!', '-', ']'];
        let mut singles = Vec::new();
        let mut ranges = Vec::new();
        for item in &self.items {
            match *item {
                ClassItem::Char(c) => singles.push(c),
                ClassItem::Range(mut lo, mut hi) => {
                    if AWKWARD.contains(&lo) {
                        singles.push(lo);
                        lo = next_char(lo);
                    }
                    if lo <= hi && AWKWARD.contains(&hi) {
                        singles.push(hi);
                        hi = prev_char(hi);
                    }
                    match lo.cmp(&hi) {
                        std::cmp::Ordering::Less => ranges.push((lo, hi)),
                        std::cmp::Ordering::Equal => singles.push(lo),
                        std::cmp::Ordering::Greater => {}
                    }
                }
            }
        }
        let has_bracket = singles.contains(&']');
        let has_dash = singles.contains(&'-');
        let has_bang = singles.contains(&'!');
        singles.retain(|c| !AWKWARD.contains(c));

        let mut body = String::new();
        if has_bracket {
            body.push(']');
        }
        for c in singles {
            body.push(c);
        }
        for (lo, hi) in ranges {
            body.push(lo);
            body.push('-');
            body.push(hi);
        }
        if has_bang {
            body.push('!');
        }
        if has_dash {
            body.push('-');
        }
        if !self.negated && body.starts_with('!') {
            // The class is exactly `{!}`.
            return f.write_str("!");
        }
        if body.is_empty() {
            // Unreachable through the parser; render something that never matches.
            return f.write_str(if self.negated {
                "?"
            } else {
                "[!\u{0}-\u{10FFFF}]"
            });
        }
        write!(f, "[{}{}]", if self.negated { "!" } else { "" }, body)
    }
}

fn next_char(c: char) -> char {
    char::from_u32(c as u32 + 1).unwrap_or(c)
}

fn prev_char(c: char) -> char {
    char::from_u32(c as u32 - 1).unwrap_or(c)
}

/// Parse pattern text into its segment structure.
///
/// Consecutive separators collapse; a leading separator sets
/// [`Pattern::is_anchored`] and a trailing one sets
/// [`Pattern::is_directory_only`]. Braces are not interpreted here.
pub fn parse_pattern(source: &str) -> Result<Pattern, PatternError> {
    if source.is_empty() {
        return Err(PatternError::EmptyPattern);
    }
    let mut segments = Vec::new();
    let mut offset = 0;
    for raw in source.split(SEPARATOR) {
        if !raw.is_empty() {
            segments.push(parse_segment(raw, offset)?);
        }
        offset += raw.len() + 1;
    }
    Ok(Pattern {
        source: source.to_owned(),
        anchored: source.starts_with(SEPARATOR),
        segments,
        directory_only: source.ends_with(SEPARATOR),
    })
}

fn parse_segment(raw: &str, base: usize) -> Result<Segment, PatternError> {
    if raw == "**" {
        return Ok(Segment::globstar());
    }
    let chars: Vec<(usize, char)> = raw.char_indices().collect();
    let mut tokens = Vec::new();
    let mut literal = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        match c {
            '*' | '?' => {
                flush_literal(&mut literal, &mut tokens);
                if c == '?' {
                    tokens.push(SegmentToken::Question);
                } else if tokens.last() != Some(&SegmentToken::Star) {
                    tokens.push(SegmentToken::Star);
                }
                i += 1;
            }
            '[' => match parse_class(&chars, i, base)? {
                Some((class, next)) => {
                    flush_literal(&mut literal, &mut tokens);
                    tokens.push(SegmentToken::Class(class));
                    i = next;
                }
                None => {
                    literal.push('[');
                    i += 1;
                }
            },
            _ => {
                literal.push(c);
                i += 1;
            }
        }
    }
    flush_literal(&mut literal, &mut tokens);
    Ok(Segment::from_tokens(tokens))
}

fn flush_literal(literal: &mut String, tokens: &mut Vec<SegmentToken>) {
    if !literal.is_empty() {
        tokens.push(SegmentToken::Literal(std::mem::take(literal)));
    }
}

/// Parse the class opening at `chars[open]`. Returns `None` when there is no
/// closing `]`, in which case the `[` is literal.
fn parse_class(
    chars: &[(usize, char)],
    open: usize,
    base: usize,
) -> Result<Option<(CharClass, usize)>, PatternError> {
    let mut start = open + 1;
    let negated = chars.get(start).map(|&(_, c)| c) == Some('!');
    if negated {
        start += 1;
    }
    // A `]` in first position is a member, so the search for the closing
    // bracket begins one past it.
    let Some(close) = chars
        .iter()
        .skip(start + 1)
        .position(|&(_, c)| c == ']')
        .map(|p| p + start + 1)
    else {
        return Ok(None);
    };

    let body = &chars[start..close];
    let mut items = Vec::new();
    let mut k = 0;
    while k < body.len() {
        let (at, c) = body[k];
        if k + 2 < body.len() && body[k + 1].1 == '-' {
            let hi = body[k + 2].1;
            if c > hi {
                return Err(PatternError::InvalidRange {
                    lo: c,
                    hi,
                    offset: base + at,
                });
            }
            items.push(ClassItem::Range(c, hi));
            k += 3;
        } else {
            items.push(ClassItem::Char(c));
            k += 1;
        }
    }
    Ok(Some((CharClass::new(negated, items), close + 1)))
}

/// Characters that [`escape`] wraps in a one-member class.
pub const SPECIAL_CHARS: [char; 5] = ['*', '?', '[', '{', '}'];

/// Turn a literal file name into a pattern matching exactly that name.
pub fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if SPECIAL_CHARS.contains(&c) {
            out.push('[');
            out.push(c);
            out.push(']');
        } else {
            out.push(c);
        }
    }
    out
}

/// True when `source` contains any of `*`, `?`, `[` or `{`.
pub fn has_magic(source: &str) -> bool {
    source.contains(['*', '?', '[', '{'])
}
