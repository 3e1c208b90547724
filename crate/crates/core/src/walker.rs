//! Resolving patterns against a directory tree.
//!
//! [`glob_stream`] is the primitive: a depth-first, demand-driven walk that
//! lists a directory only when the consumer asks for a result that needs
//! it. Entries of one directory are visited in sorted order. [`glob`]
//! collects the stream and sorts it globally.
//!
//! Literal segments are resolved with an existence probe instead of a
//! listing. `**` never descends through a directory symlink, so cyclic links
//! cannot make a walk run forever; symlinks named by explicit segments are
//! followed.

use std::collections::HashSet;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::fs::{DirEntry, EntryKind, FileSystemView};
use crate::matcher::{effective_segments, is_hidden, match_segment, MatchOptions};
use crate::pattern::{expand_braces, parse_pattern, Pattern, PatternError, Segment, SegmentKind};

#[derive(Debug, Error)]
pub enum GlobError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("root `{}` does not exist or is not a directory", .0.display())]
    RootNotFound(PathBuf),
    #[error("cannot read directory `{path}`: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// One matched path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchResult {
    /// Relative to the walk root with `/` separators. Absolute (leading `/`)
    /// for anchored patterns.
    pub path: String,
    pub is_directory: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlobOutput {
    /// Sorted by path, no duplicates.
    pub matches: Vec<MatchResult>,
    /// One line per directory that could not be read.
    pub warnings: Vec<String>,
}

impl GlobOutput {
    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.matches.iter().map(|m| m.path.as_str())
    }
}

/// All paths under `root` matching `pattern` (after brace expansion),
/// sorted and deduplicated. Unreadable directories become warnings.
pub fn glob<F: FileSystemView + ?Sized>(
    pattern: &str,
    root: &Path,
    options: &MatchOptions,
    fs: &F,
) -> Result<GlobOutput, GlobError> {
    let mut output = GlobOutput::default();
    for item in glob_stream(pattern, root, options, fs)? {
        match item {
            Ok(m) => output.matches.push(m),
            Err(e) => output.warnings.push(e.to_string()),
        }
    }
    output.matches.sort_by(|a, b| a.path.cmp(&b.path));
    output.matches.dedup_by(|a, b| a.path == b.path);
    Ok(output)
}

/// Lazily yield matches. Pattern and root problems are reported up front;
/// an unreadable directory is yielded as an `Err` item and the walk goes on.
pub fn glob_stream<'f, F: FileSystemView + ?Sized>(
    pattern: &str,
    root: &Path,
    options: &MatchOptions,
    fs: &'f F,
) -> Result<GlobStream<'f, F>, GlobError> {
    let patterns = expand_braces(pattern)?
        .iter()
        .map(|p| parse_pattern(p))
        .collect::<Result<Vec<_>, _>>()?;
    check_root(root, fs)?;
    let mut plans: Vec<Plan> = patterns.iter().map(|p| Plan::new(p, options)).collect();
    plans.reverse();
    let mut stream = GlobStream {
        fs,
        root: root.to_path_buf(),
        options: *options,
        plans,
        plan: None,
        stack: Vec::new(),
        seen: HashSet::new(),
    };
    stream.next_plan();
    Ok(stream)
}

fn check_root<F: FileSystemView + ?Sized>(root: &Path, fs: &F) -> Result<(), GlobError> {
    let is_dir = match fs.entry_kind(root) {
        Ok(Some(kind)) => kind.is_dir(),
        _ => false,
    };
    if is_dir {
        Ok(())
    } else {
        Err(GlobError::RootNotFound(root.to_path_buf()))
    }
}

#[derive(Debug)]
struct Plan {
    anchored: bool,
    segments: Vec<Segment>,
    directory_only: bool,
}

impl Plan {
    fn new(pattern: &Pattern, options: &MatchOptions) -> Self {
        Self {
            anchored: pattern.is_anchored(),
            segments: effective_segments(pattern, options)
                .into_iter()
                .cloned()
                .collect(),
            directory_only: options.directory_only || pattern.is_directory_only(),
        }
    }

    fn report(&self, rel: &str) -> String {
        if self.anchored {
            format!("/{rel}")
        } else {
            rel.to_owned()
        }
    }
}

#[derive(Debug)]
enum Work {
    /// `path` has matched the first `seg` segments.
    Candidate {
        path: String,
        kind: EntryKind,
        seg: usize,
    },
    /// Match segment `seg` against the contents of `dir`.
    Expand { dir: String, seg: usize },
    /// `**` at `seg` has reached `dir`; look inside it.
    Descend { dir: String, seg: usize },
}

pub struct GlobStream<'f, F: FileSystemView + ?Sized> {
    fs: &'f F,
    root: PathBuf,
    options: MatchOptions,
    /// Remaining plans, last one next.
    plans: Vec<Plan>,
    plan: Option<Plan>,
    stack: Vec<Work>,
    seen: HashSet<String>,
}

impl<F: FileSystemView + ?Sized> std::fmt::Debug for GlobStream<'_, F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GlobStream")
            .field("root", &self.root)
            .field("pending_work", &self.stack.len())
            .field("yielded", &self.seen.len())
            .finish()
    }
}

impl<F: FileSystemView + ?Sized> GlobStream<'_, F> {
    fn next_plan(&mut self) -> bool {
        let Some(plan) = self.plans.pop() else {
            self.plan = None;
            return false;
        };
        self.stack.clear();
        if plan.anchored {
            // The literal prefix of an absolute pattern is the implicit root.
            let prefix = plan
                .segments
                .iter()
                .take_while(|s| s.kind() == SegmentKind::Literal)
                .count();
            let path = plan.segments[..prefix]
                .iter()
                .filter_map(|s| s.literal_text())
                .collect::<Vec<_>>()
                .join("/");
            let kind = if prefix == 0 {
                Some(EntryKind::Directory)
            } else {
                self.fs
                    .entry_kind(&Path::new("/").join(&path))
                    .ok()
                    .flatten()
            };
            if let Some(kind) = kind {
                self.stack.push(Work::Candidate {
                    path,
                    kind,
                    seg: prefix,
                });
            }
        } else {
            self.stack.push(Work::Candidate {
                path: String::new(),
                kind: EntryKind::Directory,
                seg: 0,
            });
        }
        self.plan = Some(plan);
        true
    }

    fn fs_path(&self, anchored: bool, rel: &str) -> PathBuf {
        let base = if anchored {
            Path::new("/")
        } else {
            self.root.as_path()
        };
        if rel.is_empty() {
            base.to_path_buf()
        } else {
            base.join(rel)
        }
    }

    fn list(&self, anchored: bool, dir: &str) -> Result<Vec<DirEntry>, GlobError> {
        let mut entries = self
            .fs
            .list_dir(&self.fs_path(anchored, dir))
            .map_err(|source| GlobError::Unreadable {
                path: if dir.is_empty() {
                    ".".to_owned()
                } else {
                    dir.to_owned()
                },
                source,
            })?;
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(entries)
    }

    fn step(&mut self, work: Work) -> Option<Result<MatchResult, GlobError>> {
        let plan = self.plan.as_ref().expect("active plan");
        let anchored = plan.anchored;
        match work {
            Work::Candidate { path, kind, seg } => {
                if seg < plan.segments.len() {
                    if kind.is_dir() {
                        self.stack.push(Work::Expand { dir: path, seg });
                    }
                    return None;
                }
                if (path.is_empty() && !anchored) || (plan.directory_only && !kind.is_dir()) {
                    return None;
                }
                let reported = plan.report(&path);
                if !self.seen.insert(reported.clone()) {
                    return None;
                }
                Some(Ok(MatchResult {
                    path: reported,
                    is_directory: kind.is_dir(),
                }))
            }
            Work::Expand { dir, seg } => {
                let segment = &plan.segments[seg];
                match segment.kind() {
                    SegmentKind::GlobStar if self.options.recursive => {
                        let trailing = seg + 1 == plan.segments.len();
                        let include_self = trailing && plan.directory_only && !dir.is_empty();
                        self.stack.push(Work::Descend {
                            dir: dir.clone(),
                            seg,
                        });
                        if include_self {
                            self.stack.push(Work::Candidate {
                                path: dir,
                                kind: EntryKind::Directory,
                                seg: seg + 1,
                            });
                        }
                        None
                    }
                    SegmentKind::Literal if !self.options.case_insensitive => {
                        let name = segment.literal_text().expect("literal segment");
                        let path = join(&dir, name);
                        if let Ok(Some(kind)) = self.fs.entry_kind(&self.fs_path(anchored, &path)) {
                            self.stack.push(Work::Candidate {
                                path,
                                kind,
                                seg: seg + 1,
                            });
                        }
                        None
                    }
                    _ => {
                        let entries = match self.list(anchored, &dir) {
                            Ok(entries) => entries,
                            Err(e) => return Some(Err(e)),
                        };
                        let segment = &self.plan.as_ref().expect("active plan").segments[seg];
                        let matched: Vec<Work> = entries
                            .into_iter()
                            .filter(|e| match_segment(segment, &e.name, &self.options))
                            .map(|e| Work::Candidate {
                                path: join(&dir, &e.name),
                                kind: e.kind,
                                seg: seg + 1,
                            })
                            .collect();
                        self.stack.extend(matched.into_iter().rev());
                        None
                    }
                }
            }
            Work::Descend { dir, seg } => {
                let entries = match self.list(anchored, &dir) {
                    Ok(entries) => entries,
                    Err(e) => return Some(Err(e)),
                };
                let plan = self.plan.as_ref().expect("active plan");
                let next = plan.segments.get(seg + 1);
                let include_hidden = self.options.include_hidden;
                let mut pushed = Vec::new();
                for entry in entries {
                    let path = join(&dir, &entry.name);
                    let visible = include_hidden || !is_hidden(&entry.name);
                    match next {
                        None if visible => pushed.push(Work::Candidate {
                            path: path.clone(),
                            kind: entry.kind,
                            seg: seg + 1,
                        }),
                        Some(next) if match_segment(next, &entry.name, &self.options) => pushed
                            .push(Work::Candidate {
                                path: path.clone(),
                                kind: entry.kind,
                                seg: seg + 2,
                            }),
                        _ => {}
                    }
                    if visible && entry.kind == EntryKind::Directory {
                        pushed.push(Work::Descend { dir: path, seg });
                    }
                }
                self.stack.extend(pushed.into_iter().rev());
                None
            }
        }
    }
}

impl<F: FileSystemView + ?Sized> Iterator for GlobStream<'_, F> {
    type Item = Result<MatchResult, GlobError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.plan.as_ref()?;
            let Some(work) = self.stack.pop() else {
                self.next_plan();
                continue;
            };
            if let Some(item) = self.step(work) {
                return Some(item);
            }
        }
    }
}

fn join(dir: &str, name: &str) -> String {
    if dir.is_empty() {
        name.to_owned()
    } else {
        format!("{dir}/{name}")
    }
}

/// Every directory under `root`, depth first with sorted children, starting
/// with the root itself as `""`. Directory symlinks are yielded but not
/// entered; hidden directories are skipped unless `include_hidden`.
pub fn walk_collect_dirs<'f, F: FileSystemView + ?Sized>(
    root: &Path,
    options: &MatchOptions,
    fs: &'f F,
) -> Result<DirWalk<'f, F>, GlobError> {
    check_root(root, fs)?;
    Ok(DirWalk {
        fs,
        root: root.to_path_buf(),
        include_hidden: options.include_hidden,
        stack: vec![(String::new(), EntryKind::Directory)],
        deferred: None,
    })
}

pub struct DirWalk<'f, F: FileSystemView + ?Sized> {
    fs: &'f F,
    root: PathBuf,
    include_hidden: bool,
    stack: Vec<(String, EntryKind)>,
    deferred: Option<GlobError>,
}

impl<F: FileSystemView + ?Sized> Iterator for DirWalk<'_, F> {
    type Item = Result<String, GlobError>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(e) = self.deferred.take() {
            return Some(Err(e));
        }
        let (path, kind) = self.stack.pop()?;
        if kind == EntryKind::Directory {
            let fs_path = if path.is_empty() {
                self.root.clone()
            } else {
                self.root.join(&path)
            };
            match self.fs.list_dir(&fs_path) {
                Ok(mut entries) => {
                    entries.sort_by(|a, b| a.name.cmp(&b.name));
                    let children = entries
                        .into_iter()
                        .filter(|e| e.kind.is_dir() && (self.include_hidden || !is_hidden(&e.name)))
                        .map(|e| (join(&path, &e.name), e.kind))
                        .rev();
                    self.stack.extend(children);
                }
                Err(source) => {
                    self.deferred = Some(GlobError::Unreadable {
                        path: if path.is_empty() {
                            ".".to_owned()
                        } else {
                            path.clone()
                        },
                        source,
                    });
                }
            }
        }
        Some(Ok(path))
    }
}
