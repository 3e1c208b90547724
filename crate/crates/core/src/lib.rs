//! Glob pattern matching over real and in-memory directory trees.
//!
//! * [`pattern`] parses pattern text, expands brace sets and escapes names.
//! * [`matcher`] decides whether a name or relative path matches.
//! * [`walker`] resolves a pattern against a tree, eagerly or lazily.
//! * [`collection`] turns matches into metadata records, summaries and batches.
//! * [`cli`] is the `globcraft` command-line front end.
//!
//! ```
//! use std::path::Path;
//! use globcraft::{glob, MatchOptions, MemoryFs};
//!
//! let mut fs = MemoryFs::new();
//! fs.add_file("a/x.csv", 10, 0).add_file("z.csv", 20, 0);
//! let out = glob("**/*.csv", Path::new(""), &MatchOptions::recursive(), &fs).unwrap();
//! assert_eq!(out.paths().collect::<Vec<_>>(), ["a/x.csv", "z.csv"]);
//! ```

pub mod cli;
pub mod collection;
pub mod fs;
pub mod matcher;
pub mod pattern;
pub mod walker;

pub use collection::{
    analyze_collection, discover, filter_records, plan_batches, summarize, Batch, CollectionError,
    CollectionSummary, DiscoveryReport, FileFilter, FileRecord,
};
pub use fs::{CountingFs, DirEntry, EntryKind, FileMeta, FileSystemView, MemoryFs, OsFs};
pub use matcher::{fold_case, match_path, match_segment, CandidatePath, MatchOptions};
pub use pattern::{escape, expand_braces, has_magic, parse_pattern, Pattern, PatternError};
pub use walker::{
    glob, glob_stream, walk_collect_dirs, GlobError, GlobOutput, GlobStream, MatchResult,
};
