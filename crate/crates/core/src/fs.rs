//! The filesystem seam used by the walker.
//!
//! [`OsFs`] talks to the real filesystem, [`MemoryFs`] is an in-memory tree
//! for tests and [`CountingFs`] wraps either one and records calls.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::io;
use std::path::{Component, Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryKind {
    File,
    Directory,
    SymlinkToDir,
    /// Also used for dangling links.
    SymlinkToFile,
}

impl EntryKind {
    /// True for directories and links that resolve to one.
    pub fn is_dir(self) -> bool {
        matches!(self, EntryKind::Directory | EntryKind::SymlinkToDir)
    }

    pub fn is_symlink(self) -> bool {
        matches!(self, EntryKind::SymlinkToDir | EntryKind::SymlinkToFile)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirEntry {
    pub name: String,
    pub kind: EntryKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileMeta {
    pub size: u64,
    /// Seconds since the Unix epoch, UTC.
    pub modified: i64,
}

/// Read-only view of a directory tree.
///
/// `list_dir` results may come back in any order; callers sort.
pub trait FileSystemView {
    fn list_dir(&self, path: &Path) -> io::Result<Vec<DirEntry>>;

    /// Size and modification time, following symlinks.
    fn metadata(&self, path: &Path) -> io::Result<FileMeta>;

    /// Kind of the entry at `path` without following a final symlink, or
    /// `None` if nothing is there.
    fn entry_kind(&self, path: &Path) -> io::Result<Option<EntryKind>>;

    fn exists(&self, path: &Path) -> bool {
        matches!(self.entry_kind(path), Ok(Some(_)))
    }
}

impl<T: FileSystemView + ?Sized> FileSystemView for &T {
    fn list_dir(&self, path: &Path) -> io::Result<Vec<DirEntry>> {
        (**self).list_dir(path)
    }

    fn metadata(&self, path: &Path) -> io::Result<FileMeta> {
        (**self).metadata(path)
    }

    fn entry_kind(&self, path: &Path) -> io::Result<Option<EntryKind>> {
        (**self).entry_kind(path)
    }

    fn exists(&self, path: &Path) -> bool {
        (**self).exists(path)
    }
}

/// The operating system's filesystem.
///
/// Entries whose names are not valid UTF-8 are left out of listings.
#[derive(Debug, Clone, Copy, Default)]
pub struct OsFs;

impl OsFs {
    fn classify(path: &Path, file_type: std::fs::FileType) -> EntryKind {
        if file_type.is_symlink() {
            match std::fs::metadata(path) {
                Ok(target) if target.is_dir() => EntryKind::SymlinkToDir,
                _ => EntryKind::SymlinkToFile,
            }
        } else if file_type.is_dir() {
            EntryKind::Directory
        } else {
            EntryKind::File
        }
    }
}

impl FileSystemView for OsFs {
    fn list_dir(&self, path: &Path) -> io::Result<Vec<DirEntry>> {
        let dir = if path.as_os_str().is_empty() {
            Path::new(".")
        } else {
            path
        };
        let mut entries = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let Ok(entry) = entry else { continue };
            let Ok(name) = entry.file_name().into_string() else {
                continue;
            };
            let Ok(file_type) = entry.file_type() else {
                continue;
            };
            let kind = Self::classify(&entry.path(), file_type);
            entries.push(DirEntry { name, kind });
        }
        Ok(entries)
    }

    fn metadata(&self, path: &Path) -> io::Result<FileMeta> {
        let meta = std::fs::metadata(path)?;
        let modified = meta.modified().map(unix_seconds).unwrap_or(0);
        Ok(FileMeta {
            size: meta.len(),
            modified,
        })
    }

    fn entry_kind(&self, path: &Path) -> io::Result<Option<EntryKind>> {
        let path = if path.as_os_str().is_empty() {
            Path::new(".")
        } else {
            path
        };
        match std::fs::symlink_metadata(path) {
            Ok(meta) => Ok(Some(Self::classify(path, meta.file_type()))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) if e.kind() == io::ErrorKind::NotADirectory => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn unix_seconds(time: SystemTime) -> i64 {
    match time.duration_since(UNIX_EPOCH) {
        Ok(after) => after.as_secs() as i64,
        Err(before) => -(before.duration().as_secs() as i64),
    }
}

#[derive(Debug, Clone)]
enum Node {
    File {
        size: u64,
        modified: i64,
    },
    Dir {
        children: BTreeMap<String, Node>,
        unreadable: bool,
    },
    Symlink {
        target: String,
    },
}

impl Node {
    fn empty_dir() -> Self {
        Node::Dir {
            children: BTreeMap::new(),
            unreadable: false,
        }
    }
}

const MAX_SYMLINK_HOPS: usize = 40;

/// In-memory directory tree. Paths are interpreted component-wise; any root
/// or `.` component is ignored, so `""`, `"."` and `"/"` all name the root.
#[derive(Debug, Clone)]
pub struct MemoryFs {
    root: Node,
}

impl Default for MemoryFs {
    fn default() -> Self {
        Self::new()
    }
}

impl MemoryFs {
    pub fn new() -> Self {
        Self {
            root: Node::empty_dir(),
        }
    }

    /// Add a file, creating parent directories as needed.
    pub fn add_file(&mut self, path: &str, size: u64, modified: i64) -> &mut Self {
        self.insert(path, Node::File { size, modified });
        self
    }

    pub fn add_dir(&mut self, path: &str) -> &mut Self {
        let comps = split(Path::new(path));
        self.dir_mut(&comps);
        self
    }

    /// Add a symlink. Relative targets resolve against the link's directory.
    pub fn add_symlink(&mut self, path: &str, target: &str) -> &mut Self {
        self.insert(
            path,
            Node::Symlink {
                target: target.to_owned(),
            },
        );
        self
    }

    /// Make listing the directory at `path` fail with `PermissionDenied`.
    pub fn set_unreadable(&mut self, path: &str) -> &mut Self {
        let comps = split(Path::new(path));
        if let Node::Dir { unreadable, .. } = self.dir_mut(&comps) {
            *unreadable = true;
        }
        self
    }

    /// Remove whatever is at `path`.
    pub fn remove(&mut self, path: &str) -> &mut Self {
        let mut comps = split(Path::new(path));
        if let Some(name) = comps.pop() {
            if let Node::Dir { children, .. } = self.dir_mut(&comps) {
                children.remove(&name);
            }
        }
        self
    }

    /// Every entry in the tree (root excluded) with its kind, in sorted
    /// path order. Symlinks are reported, never entered.
    pub fn entries(&self) -> Vec<(String, EntryKind)> {
        let mut out = Vec::new();
        self.collect_entries(&self.root, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    fn collect_entries(
        &self,
        node: &Node,
        prefix: &mut Vec<String>,
        out: &mut Vec<(String, EntryKind)>,
    ) {
        if let Node::Dir { children, .. } = node {
            for (name, child) in children {
                prefix.push(name.clone());
                let kind = self.kind_of(prefix, child);
                out.push((prefix.join("/"), kind));
                self.collect_entries(child, prefix, out);
                prefix.pop();
            }
        }
    }

    fn insert(&mut self, path: &str, node: Node) {
        let mut comps = split(Path::new(path));
        let Some(name) = comps.pop() else { return };
        if let Node::Dir { children, .. } = self.dir_mut(&comps) {
            children.insert(name, node);
        }
    }

    fn dir_mut(&mut self, comps: &[String]) -> &mut Node {
        let mut node = &mut self.root;
        for comp in comps {
            let Node::Dir { children, .. } = node else {
                panic!("MemoryFs: `{comp}` has a non-directory parent");
            };
            node = children.entry(comp.clone()).or_insert_with(Node::empty_dir);
        }
        node
    }

    fn get(&self, comps: &[String]) -> Option<&Node> {
        let mut node = &self.root;
        for comp in comps {
            let Node::Dir { children, .. } = node else {
                return None;
            };
            node = children.get(comp)?;
        }
        Some(node)
    }

    /// Resolve `comps` to a node, following symlinks in every intermediate
    /// component and also in the last one when `follow_last` is set.
    fn resolve(&self, comps: Vec<String>, follow_last: bool) -> io::Result<Option<&Node>> {
        let mut pending: VecDeque<String> = comps.into();
        let mut resolved: Vec<String> = Vec::new();
        let mut hops = 0;
        while let Some(comp) = pending.pop_front() {
            if comp == ".." {
                resolved.pop();
                continue;
            }
            resolved.push(comp);
            let Some(node) = self.get(&resolved) else {
                return Ok(None);
            };
            if let Node::Symlink { target } = node {
                if !pending.is_empty() || follow_last {
                    hops += 1;
                    if hops > MAX_SYMLINK_HOPS {
                        return Err(io::Error::other("too many levels of symbolic links"));
                    }
                    resolved.pop();
                    if target.starts_with('/') {
                        resolved.clear();
                    }
                    for part in split(Path::new(target)).into_iter().rev() {
                        pending.push_front(part);
                    }
                }
            }
        }
        Ok(self.get(&resolved))
    }

    fn kind_of(&self, comps: &[String], node: &Node) -> EntryKind {
        match node {
            Node::File { .. } => EntryKind::File,
            Node::Dir { .. } => EntryKind::Directory,
            Node::Symlink { .. } => match self.resolve(comps.to_vec(), true) {
                Ok(Some(Node::Dir { .. })) => EntryKind::SymlinkToDir,
                _ => EntryKind::SymlinkToFile,
            },
        }
    }
}

fn split(path: &Path) -> Vec<String> {
    let mut out = Vec::new();
    for comp in path.components() {
        match comp {
            Component::Normal(name) => out.push(name.to_string_lossy().into_owned()),
            Component::ParentDir => out.push("..".to_owned()),
            Component::RootDir | Component::CurDir | Component::Prefix(_) => {}
        }
    }
    out
}

fn not_found(path: &Path) -> io::Error {
    io::Error::new(
        io::ErrorKind::NotFound,
        format!("{}: not found", path.display()),
    )
}

impl FileSystemView for MemoryFs {
    fn list_dir(&self, path: &Path) -> io::Result<Vec<DirEntry>> {
        let comps = split(path);
        match self.resolve(comps.clone(), true)? {
            Some(Node::Dir {
                unreadable: true, ..
            }) => Err(io::Error::new(
                io::ErrorKind::PermissionDenied,
                format!("{}: permission denied", path.display()),
            )),
            Some(Node::Dir { children, .. }) => {
                let mut prefix = comps;
                Ok(children
                    .iter()
                    .map(|(name, child)| {
                        prefix.push(name.clone());
                        let kind = self.kind_of(&prefix, child);
                        prefix.pop();
                        DirEntry {
                            name: name.clone(),
                            kind,
                        }
                    })
                    .collect())
            }
            Some(_) => Err(io::Error::new(
                io::ErrorKind::NotADirectory,
                format!("{}: not a directory", path.display()),
            )),
            None => Err(not_found(path)),
        }
    }

    fn metadata(&self, path: &Path) -> io::Result<FileMeta> {
        match self.resolve(split(path), true)? {
            Some(Node::File { size, modified }) => Ok(FileMeta {
                size: *size,
                modified: *modified,
            }),
            Some(_) => Ok(FileMeta {
                size: 0,
                modified: 0,
            }),
            None => Err(not_found(path)),
        }
    }

    fn entry_kind(&self, path: &Path) -> io::Result<Option<EntryKind>> {
        let comps = split(path);
        match self.resolve(comps.clone(), false)? {
            Some(node) => Ok(Some(self.kind_of(&comps, node))),
            None => Ok(None),
        }
    }
}

/// Wraps a view and counts calls, for asserting how much work a walk did.
#[derive(Debug, Default)]
pub struct CountingFs<F> {
    inner: F,
    list_calls: AtomicUsize,
    probe_calls: AtomicUsize,
    metadata_calls: AtomicUsize,
    listed: Mutex<HashSet<PathBuf>>,
}

impl<F> CountingFs<F> {
    pub fn new(inner: F) -> Self {
        Self {
            inner,
            list_calls: AtomicUsize::new(0),
            probe_calls: AtomicUsize::new(0),
            metadata_calls: AtomicUsize::new(0),
            listed: Mutex::new(HashSet::new()),
        }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn list_dir_calls(&self) -> usize {
        self.list_calls.load(Ordering::Relaxed)
    }

    /// Number of distinct directories listed.
    pub fn dirs_listed(&self) -> usize {
        self.listed.lock().expect("poisoned").len()
    }

    pub fn probe_calls(&self) -> usize {
        self.probe_calls.load(Ordering::Relaxed)
    }

    pub fn metadata_calls(&self) -> usize {
        self.metadata_calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.list_calls.store(0, Ordering::Relaxed);
        self.probe_calls.store(0, Ordering::Relaxed);
        self.metadata_calls.store(0, Ordering::Relaxed);
        self.listed.lock().expect("poisoned").clear();
    }
}

impl<F: FileSystemView> FileSystemView for CountingFs<F> {
    fn list_dir(&self, path: &Path) -> io::Result<Vec<DirEntry>> {
        self.list_calls.fetch_add(1, Ordering::Relaxed);
        self.listed
            .lock()
            .expect("poisoned")
            .insert(path.to_path_buf());
        self.inner.list_dir(path)
    }

    fn metadata(&self, path: &Path) -> io::Result<FileMeta> {
        self.metadata_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.metadata(path)
    }

    fn entry_kind(&self, path: &Path) -> io::Result<Option<EntryKind>> {
        self.probe_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.entry_kind(path)
    }

    fn exists(&self, path: &Path) -> bool {
        matches!(self.entry_kind(path), Ok(Some(_)))
    }
}
