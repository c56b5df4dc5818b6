//! On-disk cache of factorization tables.
//!
//! Entries are JSON files keyed by `(schema version, b, c, max_degree)`
//! and carry a content checksum. Writes go to a temporary file in the same
//! directory followed by an atomic rename, so concurrent processes never
//! observe partial entries; reads validate the schema, the key, and the
//! checksum, and silently discard anything corrupt.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagram::WallExponentTable;
use crate::group::{DiagramParams, Direction};
use crate::ratio::{format_rat, parse_rat};
use crate::{Error, Result};

/// Bumped whenever the stored layout changes; entries with any other
/// version are ignored.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the cache directory. Unset means no disk
/// cache; there is no other cache configuration.
pub const CACHE_DIR_ENV: &str = "CSD_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct StoredEntry {
    n: Direction,
    u_hat: String,
}

#[derive(Serialize, Deserialize)]
struct StoredTable {
    schema: u32,
    b: u32,
    c: u32,
    max_degree: u32,
    entries: Vec<StoredEntry>,
    checksum: String,
}

impl StoredTable {
    fn body_checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.schema.to_le_bytes());
        hasher.update(self.b.to_le_bytes());
        hasher.update(self.c.to_le_bytes());
        hasher.update(self.max_degree.to_le_bytes());
        for e in &self.entries {
            hasher.update(e.n.n1().to_le_bytes());
            hasher.update(e.n.n2().to_le_bytes());
            hasher.update(e.u_hat.as_bytes());
            hasher.update([0u8]);
        }
        hex::encode(hasher.finalize())
    }
}

/// A directory of cached wall-exponent tables.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// The cache named by the environment, if configured.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(DiskCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, b: u32, c: u32, max_degree: u32) -> PathBuf {
        self.dir
            .join(format!("table-v{SCHEMA_VERSION}-b{b}-c{c}-d{max_degree}.json"))
    }

    /// Loads the table stored for exactly this key, if present and intact.
    /// Corrupt entries are deleted and reported as misses.
    pub fn load(&self, params: DiagramParams, max_degree: u32) -> Option<WallExponentTable> {
        let path = self.entry_path(params.b(), params.c(), max_degree);
        let bytes = std::fs::read(&path).ok()?;
        match Self::decode(&bytes, params, max_degree) {
            Some(table) => Some(table),
            None => {
                let _ = std::fs::remove_file(&path);
                None
            }
        }
    }

    fn decode(
        bytes: &[u8],
        params: DiagramParams,
        max_degree: u32,
    ) -> Option<WallExponentTable> {
        let stored: StoredTable = serde_json::from_slice(bytes).ok()?;
        if stored.schema != SCHEMA_VERSION
            || stored.b != params.b()
            || stored.c != params.c()
            || stored.max_degree != max_degree
            || stored.checksum != stored.body_checksum()
        {
            return None;
        }
        let entries: Vec<(Direction, crate::ratio::Rat)> = stored
            .entries
            .iter()
            .map(|e| Ok((e.n, parse_rat(&e.u_hat)?)))
            .collect::<Result<_>>()
            .ok()?;
        WallExponentTable::from_entries(params, max_degree, entries).ok()
    }

    /// Stores a table under its `(b, c, truncation)` key via an atomic
    /// temp-file-and-rename, creating the directory if needed.
    pub fn store(&self, table: &WallExponentTable) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let mut stored = StoredTable {
            schema: SCHEMA_VERSION,
            b: table.params().b(),
            c: table.params().c(),
            max_degree: table.truncation(),
            entries: table
                .entries()
                .map(|(n, v)| StoredEntry {
                    n: *n,
                    u_hat: format_rat(v),
                })
                .collect(),
            checksum: String::new(),
        };
        stored.checksum = stored.body_checksum();
        let body = serde_json::to_vec_pretty(&stored)
            .map_err(|e| Error::Cache(format!("serialize failed: {e}")))?;
        let path = self.entry_path(stored.b, stored.c, stored.max_degree);
        let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
        std::fs::write(&tmp, &body)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}
