//! File-collection analytics on top of [`glob`]: metadata records,
//! summaries, attribute filters, multi-pattern discovery and batch plans.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::fs::FileSystemView;
use crate::matcher::MatchOptions;
use crate::pattern::SEPARATOR;
use crate::walker::{glob, GlobError, MatchResult};

/// Patterns scanned by [`discover`] when none are given.
pub const DEFAULT_DISCOVERY_PATTERNS: [&str; 4] = ["*.csv", "*.json", "*.xlsx", "*.parquet"];

pub const DEFAULT_BATCH_SIZE: usize = 100;

#[derive(Debug, Error)]
pub enum CollectionError {
    #[error(transparent)]
    Glob(#[from] GlobError),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("batch size must be at least 1")]
    InvalidBatchSize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub size: u64,
    /// Seconds since the Unix epoch, UTC.
    pub modified: i64,
    /// From the last `.` of the final component, inclusive; empty if none.
    pub extension: String,
    /// Number of separators in `path`.
    pub depth: usize,
}

impl FileRecord {
    pub fn new(path: &str, size: u64, modified: i64) -> Self {
        Self {
            path: path.to_owned(),
            size,
            modified,
            extension: extension_of(path).to_owned(),
            depth: path.matches(SEPARATOR).count(),
        }
    }
}

/// Extension of the final path component. Leading dots do not start an
/// extension, so `.bashrc` has none while `archive.tar.gz` has `.gz`.
pub fn extension_of(path: &str) -> &str {
    let name = path.rsplit(SEPARATOR).next().unwrap_or(path);
    let stem_start = name.len() - name.trim_start_matches('.').len();
    match name[stem_start..].rfind('.') {
        Some(dot) => &name[stem_start + dot..],
        None => "",
    }
}

/// Records for every file (not directory) matching `pattern`, in path order.
/// Files that vanish before their metadata is read are skipped; the second
/// element lists warnings from both the walk and those skips.
pub fn analyze_collection<F: FileSystemView + ?Sized>(
    pattern: &str,
    root: &Path,
    options: &MatchOptions,
    fs: &F,
) -> Result<(Vec<FileRecord>, Vec<String>), CollectionError> {
    let output = glob(pattern, root, options, fs)?;
    let mut warnings = output.warnings;
    let records = read_records(&output.matches, root, fs, &mut warnings);
    Ok((records, warnings))
}

/// Metadata records for the non-directory entries of `matches`, in order.
/// Entries whose metadata cannot be read are reported in `warnings`.
pub fn read_records<F: FileSystemView + ?Sized>(
    matches: &[MatchResult],
    root: &Path,
    fs: &F,
    warnings: &mut Vec<String>,
) -> Vec<FileRecord> {
    let mut records = Vec::new();
    for m in matches.iter().filter(|m| !m.is_directory) {
        let fs_path = if m.path.starts_with(SEPARATOR) {
            Path::new(&m.path).to_path_buf()
        } else {
            root.join(&m.path)
        };
        match fs.metadata(&fs_path) {
            Ok(meta) => records.push(FileRecord::new(&m.path, meta.size, meta.modified)),
            Err(e) => warnings.push(format!("skipping `{}`: {e}", m.path)),
        }
    }
    records
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CollectionSummary {
    pub file_count: usize,
    pub total_size: u64,
    pub extension_histogram: BTreeMap<String, usize>,
    pub max_depth: usize,
}

impl CollectionSummary {
    /// Total size in MiB, as displayed with two decimals.
    pub fn total_megabytes(&self) -> f64 {
        self.total_size as f64 / (1024.0 * 1024.0)
    }
}

pub fn summarize(records: &[FileRecord]) -> CollectionSummary {
    let mut summary = CollectionSummary::default();
    for record in records {
        summary.file_count += 1;
        summary.total_size += record.size;
        *summary
            .extension_histogram
            .entry(record.extension.clone())
            .or_insert(0) += 1;
        summary.max_depth = summary.max_depth.max(record.depth);
    }
    summary
}

/// Attribute bounds; every bound is optional and inclusive.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileFilter {
    pub min_size: Option<u64>,
    pub max_size: Option<u64>,
    /// Keep records modified at or after this time.
    pub newer_than: Option<i64>,
    /// Keep records modified at or before this time.
    pub older_than: Option<i64>,
    /// Exact, case-sensitive extension texts such as `.csv`.
    pub extensions: Option<BTreeSet<String>>,
}

impl FileFilter {
    pub fn is_empty(&self) -> bool {
        *self == FileFilter::default()
    }

    pub fn validate(&self) -> Result<(), CollectionError> {
        if let (Some(lo), Some(hi)) = (self.min_size, self.max_size) {
            if lo > hi {
                return Err(CollectionError::InvalidFilter(format!(
                    "min size {lo} exceeds max size {hi}"
                )));
            }
        }
        if let (Some(newer), Some(older)) = (self.newer_than, self.older_than) {
            if newer > older {
                return Err(CollectionError::InvalidFilter(format!(
                    "newer-than bound {newer} is after older-than bound {older}"
                )));
            }
        }
        Ok(())
    }

    pub fn accepts(&self, record: &FileRecord) -> bool {
        self.min_size.is_none_or(|lo| record.size >= lo)
            && self.max_size.is_none_or(|hi| record.size <= hi)
            && self.newer_than.is_none_or(|t| record.modified >= t)
            && self.older_than.is_none_or(|t| record.modified <= t)
            && self
                .extensions
                .as_ref()
                .is_none_or(|exts| exts.contains(&record.extension))
    }
}

pub fn filter_records(
    records: &[FileRecord],
    filter: &FileFilter,
) -> Result<Vec<FileRecord>, CollectionError> {
    filter.validate()?;
    Ok(records
        .iter()
        .filter(|r| filter.accepts(r))
        .cloned()
        .collect())
}

/// Per-pattern match lists over one root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiscoveryReport {
    /// Pattern text to its sorted matches, in input order.
    pub per_pattern: IndexMap<String, Vec<String>>,
    /// Patterns that failed, with the reason. They still appear in
    /// `per_pattern` with no matches.
    pub errors: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

/// Run each pattern independently against `root`.
///
/// With `patterns == None` the default data-file patterns are used, each
/// prefixed with `**/` and matched recursively.
pub fn discover<F: FileSystemView + ?Sized>(
    root: &Path,
    patterns: Option<&[String]>,
    options: &MatchOptions,
    fs: &F,
) -> DiscoveryReport {
    let (patterns, options) = match patterns {
        Some(p) => (p.to_vec(), *options),
        None => (
            DEFAULT_DISCOVERY_PATTERNS
                .iter()
                .map(|p| format!("**/{p}"))
                .collect(),
            MatchOptions {
                recursive: true,
                ..*options
            },
        ),
    };
    let mut report = DiscoveryReport::default();
    for pattern in patterns {
        let matches = match glob(&pattern, root, &options, fs) {
            Ok(output) => {
                report.warnings.extend(output.warnings);
                output.matches.into_iter().map(|m| m.path).collect()
            }
            Err(e) => {
                report.errors.push((pattern.clone(), e.to_string()));
                Vec::new()
            }
        };
        report.per_pattern.insert(pattern, matches);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Batch {
    pub index: usize,
    pub paths: Vec<String>,
}

/// Split `paths` into consecutive chunks of `batch_size`; the last may be short.
pub fn plan_batches(paths: &[String], batch_size: usize) -> Result<Vec<Batch>, CollectionError> {
    if batch_size == 0 {
        return Err(CollectionError::InvalidBatchSize);
    }
    Ok(paths
        .chunks(batch_size)
        .enumerate()
        .map(|(index, chunk)| Batch {
            index,
            paths: chunk.to_vec(),
        })
        .collect())
}
