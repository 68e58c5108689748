//! Content-addressed on-disk cache of characters.
//!
//! An entry lives at `<dir>/<aa>/<digest>.json`, where `digest` is the SHA-256 of the
//! schema version and the label. The entry stores the SHA-256 of the canonical JSON of
//! the character, and a read is accepted only when schema, label and content hash all
//! match. Anything else is recomputed and overwritten.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use krqt::tableaux::KrLabel;
use krqt::ylattice::QtCharacter;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the on-disk layout or the character encoding changes.
pub const SCHEMA_VERSION: &str = "krqt-char-cache/1";

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: String,
    label: KrLabel,
    content_sha256: String,
    character: QtCharacter,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the canonical JSON encoding of a character.
pub fn character_digest(chi: &QtCharacter) -> Result<String> {
    Ok(sha256_hex(&serde_json::to_vec(chi)?))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `KRQT_CACHE_DIR`, else `$XDG_CACHE_HOME/krqt`, else `$HOME/.cache/krqt`.
    pub fn from_env() -> Option<Self> {
        let env = |k: &str| {
            std::env::var_os(k)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        };
        let dir = env("KRQT_CACHE_DIR")
            .or_else(|| env("XDG_CACHE_HOME").map(|d| d.join("krqt")))
            .or_else(|| env("HOME").map(|d| d.join(".cache").join("krqt")))?;
        Some(Self { dir })
    }

    #[cfg(test)]
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, label: &KrLabel) -> PathBuf {
        let key = format!(
            "{SCHEMA_VERSION}|r={}|i={}|j={}|k={}",
            label.r, label.i, label.j, label.k
        );
        let digest = sha256_hex(key.as_bytes());
        self.dir.join(&digest[..2]).join(format!("{digest}.json"))
    }

    fn read(&self, label: &KrLabel) -> Option<QtCharacter> {
        let bytes = fs::read(self.path_for(label)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        let valid = entry.schema == SCHEMA_VERSION
            && entry.label == *label
            && character_digest(&entry.character).ok()? == entry.content_sha256;
        valid.then_some(entry.character)
    }

    fn write(&self, label: &KrLabel, chi: &QtCharacter) -> Result<()> {
        let path = self.path_for(label);
        let parent = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(parent)
            .with_context(|| format!("creating cache directory {}", parent.display()))?;
        let entry = Entry {
            schema: SCHEMA_VERSION.to_string(),
            label: *label,
            content_sha256: character_digest(chi)?,
            character: chi.clone(),
        };
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cached character, computing and storing it on a miss. A failed write is not fatal.
    pub fn get_or_compute(
        &self,
        label: &KrLabel,
        compute: impl FnOnce() -> krqt::Result<QtCharacter>,
    ) -> Result<(QtCharacter, bool)> {
        if let Some(chi) = self.read(label) {
            return Ok((chi, true));
        }
        let chi = compute()?;
        if let Err(e) = self.write(label, &chi) {
            eprintln!("warning: could not write cache entry: {e:#}");
        }
        Ok((chi, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use krqt::tableaux::q_character;

    #[test]
    fn hit_equals_fresh_computation() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = Cache::at(tmp.path());
        let label = KrLabel::new(2, 1, 0, 2).unwrap();
        let (first, hit) = cache
            .get_or_compute(&label, || q_character(&label))
            .unwrap();
        assert!(!hit);
        let (second, hit) = cache
            .get_or_compute(&label, || panic!("should be served from disk"))
            .unwrap();
        assert!(hit);
        assert_eq!(first, second);
        assert_eq!(second, q_character(&label).unwrap());
    }

    #[test]
    fn tampered_entry_is_recomputed() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = Cache::at(tmp.path());
        let label = KrLabel::new(1, 1, 0, 2).unwrap();
        cache
            .get_or_compute(&label, || q_character(&label))
            .unwrap();
        let path = cache.path_for(&label);
        let mut entry: serde_json::Value =
            serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        entry["content_sha256"] = serde_json::Value::String("0".repeat(64));
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        let (chi, hit) = cache
            .get_or_compute(&label, || q_character(&label))
            .unwrap();
        assert!(!hit);
        assert_eq!(chi, q_character(&label).unwrap());

        fs::write(&path, b"not json").unwrap();
        let (_, hit) = cache
            .get_or_compute(&label, || q_character(&label))
            .unwrap();
        assert!(!hit);
        let (_, hit) = cache
            .get_or_compute(&label, || q_character(&label))
            .unwrap();
        assert!(hit);
    }
}
