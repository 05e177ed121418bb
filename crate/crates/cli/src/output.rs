//! All-or-nothing output: files are staged as temporaries next to their
//! destination and only renamed into place once every one was written.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

#[derive(Default)]
pub struct Staged {
    files: Vec<(PathBuf, NamedTempFile)>,
}

impl Staged {
    pub fn add(&mut self, path: impl Into<PathBuf>, contents: &[u8]) -> Result<()> {
        let path = path.into();
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp =
            NamedTempFile::new_in(&dir).with_context(|| format!("staging {}", path.display()))?;
        tmp.write_all(contents)
            .and_then(|_| tmp.as_file().sync_all())
            .with_context(|| format!("writing {}", path.display()))?;
        self.files.push((path, tmp));
        Ok(())
    }

    /// Moves every staged file into place. On failure the files already
    /// moved are removed again; the remaining temporaries delete themselves.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut done: Vec<PathBuf> = Vec::with_capacity(self.files.len());
        for (path, tmp) in self.files {
            if let Err(e) = tmp.persist(&path) {
                for p in &done {
                    let _ = fs::remove_file(p);
                }
                return Err(e.error).with_context(|| format!("writing {}", path.display()));
            }
            done.push(path);
        }
        Ok(done)
    }
}

pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}
