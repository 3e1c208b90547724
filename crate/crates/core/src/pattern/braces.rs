use super::{PatternError, SEPARATOR};

#[derive(Debug)]
enum Part {
    Text(String),
    Group(Vec<Vec<Part>>),
}

struct Frame {
    open_at: usize,
    alternatives: Vec<Vec<Part>>,
}

/// Expand `{a,b}` alternatives into separate patterns.
///
/// Alternatives are substituted left to right and nested sets expand
/// recursively, so `a{b{c,d},e}` yields `abc`, `abd`, `ae`. Duplicates are
/// kept. Braces inside a bracket expression are ordinary characters, which
/// keeps the output of [`super::escape`] stable under expansion.
pub fn expand_braces(source: &str) -> Result<Vec<String>, PatternError> {
    let parts = parse(source)?;
    Ok(expand(&parts))
}

fn parse(source: &str) -> Result<Vec<Part>, PatternError> {
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let mut stack: Vec<Frame> = Vec::new();
    let mut current: Vec<Part> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (at, c) = chars[i];
        match c {
            '[' => {
                let end = class_end(&chars, i).unwrap_or(i + 1);
                let text: String = chars[i..end].iter().map(|&(_, c)| c).collect();
                push_text(&mut current, &text);
                i = end;
                continue;
            }
            '{' => {
                stack.push(Frame {
                    open_at: at,
                    alternatives: vec![std::mem::take(&mut current)],
                });
                // The frame's first slot holds the outer sequence until the
                // group closes; alternatives start after it.
            }
            ',' if !stack.is_empty() => {
                let frame = stack.last_mut().expect("non-empty stack");
                frame.alternatives.push(std::mem::take(&mut current));
            }
            '}' => {
                let Some(mut frame) = stack.pop() else {
                    return Err(PatternError::UnbalancedBrace {
                        brace: '}',
                        offset: at,
                    });
                };
                frame.alternatives.push(std::mem::take(&mut current));
                let mut alternatives = frame.alternatives;
                current = alternatives.remove(0);
                current.push(Part::Group(alternatives));
            }
            _ => push_text(&mut current, c.encode_utf8(&mut [0; 4])),
        }
        i += 1;
    }
    if let Some(frame) = stack.first() {
        return Err(PatternError::UnbalancedBrace {
            brace: '{',
            offset: frame.open_at,
        });
    }
    Ok(current)
}

/// Index one past the `]` closing the class that opens at `open`, if any.
/// Mirrors the class rules of the segment parser.
fn class_end(chars: &[(usize, char)], open: usize) -> Option<usize> {
    let mut start = open + 1;
    if chars.get(start).map(|&(_, c)| c) == Some('!') {
        start += 1;
    }
    if chars.get(start).map(|&(_, c)| c) == Some(SEPARATOR) {
        return None;
    }
    for (k, &(_, c)) in chars.iter().enumerate().skip(start + 1) {
        match c {
            ']' => return Some(k + 1),
            SEPARATOR => return None,
            _ => {}
        }
    }
    None
}

fn push_text(parts: &mut Vec<Part>, text: &str) {
    if let Some(Part::Text(last)) = parts.last_mut() {
        last.push_str(text);
    } else {
        parts.push(Part::Text(text.to_owned()));
    }
}

fn expand(parts: &[Part]) -> Vec<String> {
    let mut out = vec![String::new()];
    for part in parts {
        match part {
            Part::Text(text) => out.iter_mut().for_each(|s| s.push_str(text)),
            Part::Group(alternatives) => {
                let tails: Vec<String> = alternatives.iter().flat_map(|a| expand(a)).collect();
                out = out
                    .iter()
                    .flat_map(|head| tails.iter().map(move |tail| format!("{head}{tail}")))
                    .collect();
            }
        }
    }
    out
}
