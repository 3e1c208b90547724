//! Command-line front end.
//!
//! Patterns must reach the program unexpanded, so quote them in the shell.
//!
//! Exit codes: 0 success (or a match), 1 no match / empty result with
//! `--fail-empty`, 2 usage or pattern error, 3 I/O error.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::collection::{
    filter_records, plan_batches, read_records, summarize, CollectionError, FileFilter,
    DEFAULT_BATCH_SIZE,
};
use crate::fs::{FileSystemView, OsFs};
use crate::matcher::{match_path, CandidatePath, MatchOptions};
use crate::pattern::{escape, expand_braces, parse_pattern, PatternError};
use crate::walker::{glob, GlobError, MatchResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_MATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "globcraft",
    version,
    about = "Glob matching and file-collection statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List paths matching any of the patterns.
    Find {
        #[arg(required = true)]
        patterns: Vec<String>,
        #[command(flatten)]
        matching: MatchFlags,
        #[command(flatten)]
        walk: WalkFlags,
    },
    /// Exit 0 if PATH matches PATTERN, 1 otherwise. A trailing `/` marks a directory.
    Match {
        pattern: String,
        path: String,
        #[command(flatten)]
        matching: MatchFlags,
    },
    /// Count, size and extension histogram of matching files.
    Stats {
        #[arg(required = true)]
        patterns: Vec<String>,
        #[command(flatten)]
        matching: MatchFlags,
        #[command(flatten)]
        walk: WalkFlags,
    },
    /// Split the matches into fixed-size batches.
    Batch {
        #[arg(required = true)]
        patterns: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BATCH_SIZE as u64, value_parser = clap::value_parser!(u64).range(1..))]
        batch_size: u64,
        #[command(flatten)]
        matching: MatchFlags,
        #[command(flatten)]
        walk: WalkFlags,
    },
    /// Print TEXT as a pattern that matches it literally.
    Escape { text: String },
}

#[derive(Debug, Args)]
struct MatchFlags {
    /// Let `**` span directories.
    #[arg(short, long)]
    recursive: bool,
    /// Match names starting with `.`.
    #[arg(long, env = "GLOBCRAFT_HIDDEN")]
    hidden: bool,
    #[arg(short = 'i', long)]
    ignore_case: bool,
}

impl MatchFlags {
    fn options(&self) -> MatchOptions {
        MatchOptions {
            recursive: self.recursive,
            case_insensitive: self.ignore_case,
            include_hidden: self.hidden,
            directory_only: false,
        }
    }
}

#[derive(Debug, Args)]
struct WalkFlags {
    #[arg(long, default_value = ".")]
    root: PathBuf,
    /// Print absolute paths instead of root-relative ones.
    #[arg(long)]
    absolute: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Exit 1 when nothing matched.
    #[arg(long)]
    fail_empty: bool,
    /// Minimum file size in bytes (inclusive).
    #[arg(long)]
    min_size: Option<u64>,
    #[arg(long)]
    max_size: Option<u64>,
    /// Keep files modified on or after this date (YYYY-MM-DD, UTC midnight).
    #[arg(long, value_parser = parse_timestamp)]
    newer_than: Option<i64>,
    #[arg(long, value_parser = parse_timestamp)]
    older_than: Option<i64>,
    /// Keep files with this extension; repeatable.
    #[arg(long = "ext")]
    extensions: Vec<String>,
}

impl WalkFlags {
    fn filter(&self) -> FileFilter {
        let extensions = (!self.extensions.is_empty()).then(|| {
            self.extensions
                .iter()
                .map(|e| {
                    if e.starts_with('.') {
                        e.clone()
                    } else {
                        format!(".{e}")
                    }
                })
                .collect::<BTreeSet<_>>()
        });
        FileFilter {
            min_size: self.min_size,
            max_size: self.max_size,
            newer_than: self.newer_than,
            older_than: self.older_than,
            extensions,
        }
    }
}

/// Parse `YYYY-MM-DD` as UTC midnight, or a full RFC 3339 timestamp.
pub fn parse_timestamp(text: &str) -> Result<i64, String> {
    if let Ok(date) = NaiveDate::parse_from_str(text, "%Y-%m-%d") {
        return Ok(date
            .and_hms_opt(0, 0, 0)
            .expect("midnight")
            .and_utc()
            .timestamp());
    }
    DateTime::parse_from_rfc3339(text)
        .map(|t| t.timestamp())
        .map_err(|_| format!("`{text}` is not a YYYY-MM-DD date or RFC 3339 timestamp"))
}

fn format_timestamp(secs: i64) -> String {
    match DateTime::from_timestamp(secs, 0) {
        Some(t) => t.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        None => secs.to_string(),
    }
}

/// Run with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, &OsFs, out) {
        Ok(outcome) => {
            for warning in &outcome.warnings {
                let _ = writeln!(err, "warning: {warning}");
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Glob(GlobError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Pattern(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Glob(GlobError::Pattern(_)) => EXIT_USAGE,
            CliError::Glob(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_IO,
        }
    }
}

impl From<GlobError> for CliError {
    fn from(e: GlobError) -> Self {
        match e {
            GlobError::Pattern(p) => CliError::Pattern(p),
            other => CliError::Glob(other),
        }
    }
}

impl From<CollectionError> for CliError {
    fn from(e: CollectionError) -> Self {
        match e {
            CollectionError::Glob(g) => g.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

struct Outcome {
    code: i32,
    /// Reported on stderr unless the format carries them.
    warnings: Vec<String>,
}

impl Outcome {
    fn new(code: i32) -> Self {
        Self {
            code,
            warnings: Vec::new(),
        }
    }
}

fn dispatch<F: FileSystemView + ?Sized>(
    command: Command,
    fs: &F,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    match command {
        Command::Find {
            patterns,
            matching,
            walk,
        } => find(&patterns, &matching, &walk, fs, out),
        Command::Match {
            pattern,
            path,
            matching,
        } => {
            let options = matching.options();
            let is_directory = path.ends_with('/');
            let path = path.trim_end_matches('/');
            let mut matched = false;
            for expanded in expand_braces(&pattern)? {
                let parsed = parse_pattern(&expanded)?;
                let candidate = CandidatePath { path, is_directory };
                matched |= match_path(&parsed, candidate, &options);
            }
            Ok(Outcome::new(if matched { EXIT_OK } else { EXIT_NO_MATCH }))
        }
        Command::Stats {
            patterns,
            matching,
            walk,
        } => stats(&patterns, &matching, &walk, fs, out),
        Command::Batch {
            patterns,
            batch_size,
            matching,
            walk,
        } => batch(&patterns, batch_size as usize, &matching, &walk, fs, out),
        Command::Escape { text } => {
            writeln!(out, "{}", escape(&text))?;
            Ok(Outcome::new(EXIT_OK))
        }
    }
}

struct Collected {
    matches: Vec<MatchResult>,
    warnings: Vec<String>,
}

/// Union of the matches of every pattern, sorted by path.
fn collect_matches<F: FileSystemView + ?Sized>(
    patterns: &[String],
    options: &MatchOptions,
    root: &Path,
    fs: &F,
) -> Result<Collected, CliError> {
    let mut union = BTreeMap::new();
    let mut warnings = Vec::new();
    for pattern in patterns {
        let output = glob(pattern, root, options, fs)?;
        warnings.extend(output.warnings);
        for m in output.matches {
            union.entry(m.path.clone()).or_insert(m);
        }
    }
    Ok(Collected {
        matches: union.into_values().collect(),
        warnings,
    })
}

/// Paths after optional attribute filtering. Filtering keeps files only.
fn filtered_paths<F: FileSystemView + ?Sized>(
    collected: &mut Collected,
    walk: &WalkFlags,
    fs: &F,
) -> Result<Vec<String>, CliError> {
    let filter = walk.filter();
    if filter.is_empty() {
        return Ok(collected.matches.iter().map(|m| m.path.clone()).collect());
    }
    let records = read_records(&collected.matches, &walk.root, fs, &mut collected.warnings);
    Ok(filter_records(&records, &filter)?
        .into_iter()
        .map(|r| r.path)
        .collect())
}

fn display_path(path: &str, walk: &WalkFlags) -> Result<String, CliError> {
    if !walk.absolute || path.starts_with('/') {
        return Ok(path.to_owned());
    }
    let root = std::path::absolute(&walk.root)?;
    let mut text = root.to_string_lossy().replace('\\', "/");
    while text.len() > 1 && text.ends_with('/') {
        text.pop();
    }
    if !text.ends_with('/') {
        text.push('/');
    }
    text.push_str(path);
    Ok(text)
}

#[derive(Serialize)]
struct FindJson<'a> {
    pattern: String,
    root: String,
    matches: &'a [String],
    warnings: &'a [String],
}

fn find<F: FileSystemView + ?Sized>(
    patterns: &[String],
    matching: &MatchFlags,
    walk: &WalkFlags,
    fs: &F,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut collected = collect_matches(patterns, &matching.options(), &walk.root, fs)?;
    let paths = filtered_paths(&mut collected, walk, fs)?
        .iter()
        .map(|p| display_path(p, walk))
        .collect::<Result<Vec<_>, _>>()?;
    let mut warnings = collected.warnings;
    match walk.format {
        OutputFormat::Plain => {
            for path in &paths {
                writeln!(out, "{path}")?;
            }
        }
        OutputFormat::Json => {
            let doc = FindJson {
                pattern: patterns.join(" "),
                root: walk.root.to_string_lossy().into_owned(),
                matches: &paths,
                warnings: &warnings,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
            warnings.clear();
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(["path"])?;
            for path in &paths {
                writer.write_record([path])?;
            }
            writer.flush()?;
        }
    }
    let code = if walk.fail_empty && paths.is_empty() {
        EXIT_NO_MATCH
    } else {
        EXIT_OK
    };
    Ok(Outcome { code, warnings })
}

#[derive(Serialize)]
struct StatsJson<'a> {
    file_count: usize,
    total_size_bytes: u64,
    extensions: &'a BTreeMap<String, usize>,
    max_depth: usize,
}

fn stats<F: FileSystemView + ?Sized>(
    patterns: &[String],
    matching: &MatchFlags,
    walk: &WalkFlags,
    fs: &F,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut collected = collect_matches(patterns, &matching.options(), &walk.root, fs)?;
    let records = read_records(&collected.matches, &walk.root, fs, &mut collected.warnings);
    let records = filter_records(&records, &walk.filter())?;
    let summary = summarize(&records);
    match walk.format {
        OutputFormat::Plain => {
            writeln!(out, "Total files found: {}", summary.file_count)?;
            writeln!(out, "Total size: {:.2} MB", summary.total_megabytes())?;
            writeln!(
                out,
                "File types: {}",
                format_histogram(&summary.extension_histogram)
            )?;
            writeln!(out, "Max depth: {}", summary.max_depth)?;
        }
        OutputFormat::Json => {
            let doc = StatsJson {
                file_count: summary.file_count,
                total_size_bytes: summary.total_size,
                extensions: &summary.extension_histogram,
                max_depth: summary.max_depth,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(["path", "size", "modified_utc", "extension", "depth"])?;
            for r in &records {
                writer.write_record([
                    display_path(&r.path, walk)?,
                    r.size.to_string(),
                    format_timestamp(r.modified),
                    r.extension.clone(),
                    r.depth.to_string(),
                ])?;
            }
            writer.flush()?;
        }
    }
    let code = if walk.fail_empty && summary.file_count == 0 {
        EXIT_NO_MATCH
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        code,
        warnings: collected.warnings,
    })
}

/// `{'.csv': 2, '.json': 1}`, most frequent first.
fn format_histogram(histogram: &BTreeMap<String, usize>) -> String {
    let mut entries: Vec<(&String, &usize)> = histogram.iter().collect();
    entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    let body: Vec<String> = entries
        .iter()
        .map(|(ext, n)| format!("'{ext}': {n}"))
        .collect();
    format!("{{{}}}", body.join(", "))
}

#[derive(Serialize)]
struct BatchJson {
    batch_size: usize,
    batches: Vec<crate::collection::Batch>,
}

fn batch<F: FileSystemView + ?Sized>(
    patterns: &[String],
    batch_size: usize,
    matching: &MatchFlags,
    walk: &WalkFlags,
    fs: &F,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut collected = collect_matches(patterns, &matching.options(), &walk.root, fs)?;
    let paths = filtered_paths(&mut collected, walk, fs)?
        .iter()
        .map(|p| display_path(p, walk))
        .collect::<Result<Vec<_>, _>>()?;
    let plan = plan_batches(&paths, batch_size)?;
    match walk.format {
        OutputFormat::Plain => {
            for b in &plan {
                for path in &b.paths {
                    writeln!(out, "{}\t{path}", b.index)?;
                }
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &BatchJson {
                    batch_size,
                    batches: plan,
                },
            )?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(["batch", "path"])?;
            for b in &plan {
                for path in &b.paths {
                    writer.write_record([b.index.to_string(), path.clone()])?;
                }
            }
            writer.flush()?;
        }
    }
    let code = if walk.fail_empty && paths.is_empty() {
        EXIT_NO_MATCH
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        code,
        warnings: collected.warnings,
    })
}
