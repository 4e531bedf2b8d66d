//! Evidence collectors. Each one fills its own [`EvidenceSet`] partition;
//! the pipeline merges them.
//!
//! [`EvidenceSet`]: crate::evidence::EvidenceSet

pub mod licenses;
pub mod local;
pub mod pid;
pub mod registry;
pub mod reuse;

use std::collections::BTreeSet;
use std::io;
use std::path::{Path, PathBuf};

/// Relative paths (with `/` separators) of every file and directory below a
/// root, excluding version control internals. Sorted.
#[derive(Debug, Clone, Default)]
pub struct RepoTree {
    pub root: PathBuf,
    pub files: Vec<String>,
    pub dirs: BTreeSet<String>,
}

impl RepoTree {
    pub fn scan(root: &Path) -> io::Result<RepoTree> {
        let meta = std::fs::metadata(root)?;
        if !meta.is_dir() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("{} is not a directory", root.display()),
            ));
        }
        let mut tree = RepoTree {
            root: root.to_path_buf(),
            ..RepoTree::default()
        };
        let walker = walkdir::WalkDir::new(root)
            .min_depth(1)
            .sort_by_file_name()
            .into_iter()
            .filter_entry(|e| e.file_name() != ".git");
        for entry in walker {
            let entry = entry.map_err(io::Error::other)?;
            let rel = entry
                .path()
                .strip_prefix(root)
                .expect("walkdir yields paths below the root");
            let rel = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            if entry.file_type().is_dir() {
                tree.dirs.insert(rel);
            } else {
                tree.files.push(rel);
            }
        }
        tree.files.sort();
        Ok(tree)
    }

    pub fn abs(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn has_dir(&self, rel: &str) -> bool {
        self.dirs.contains(rel)
    }

    pub fn read(&self, rel: &str) -> Option<String> {
        std::fs::read(self.abs(rel))
            .ok()
            .map(|b| String::from_utf8_lossy(&b).into_owned())
    }

    /// Files directly inside `dir` ("" for the root) whose lower-cased name
    /// satisfies `pred`.
    pub fn files_in(&self, dir: &str, pred: impl Fn(&str) -> bool) -> Vec<&String> {
        self.files
            .iter()
            .filter(|f| {
                let (parent, name) = match f.rsplit_once('/') {
                    Some((p, n)) => (p, n),
                    None => ("", f.as_str()),
                };
                parent == dir && pred(&name.to_lowercase())
            })
            .collect()
    }

    pub fn first_in(&self, dir: &str, pred: impl Fn(&str) -> bool) -> Option<&String> {
        self.files_in(dir, pred).into_iter().next()
    }

    pub fn any_in(&self, dirs: &[&str], pred: impl Fn(&str) -> bool + Copy) -> Option<&String> {
        dirs.iter().find_map(|d| self.first_in(d, pred))
    }
}

/// Stem of a lower-cased file name: `readme.md` → `readme`.
pub(crate) fn stem(name: &str) -> &str {
    name.split('.').next().unwrap_or(name)
}
