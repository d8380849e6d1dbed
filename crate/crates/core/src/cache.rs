//! Persistent cache of automorphism groups.
//!
//! Entries are keyed by a SHA-256 digest of the sorted element list and
//! store, for each generator of `Aut(E)`, the images of the generating
//! sequence. Every hit is rebuilt through the homomorphism audit and checked
//! against the stored order before use; a failing entry is recomputed.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::automorphism::{assemble, automorphism_group_of, AutomorphismGroup, GroupHomomorphism};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::table::FiniteGroup;

/// Environment variable naming the directory of the default cache file.
pub const CACHE_DIR_ENV: &str = "PROTOFUSION_CACHE_DIR";
const CACHE_FILE: &str = "aut_cache.json";

type Cycles = Vec<Vec<usize>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Entry {
    degree: usize,
    order: u64,
    generating_sequence: Vec<Cycles>,
    /// Per Aut generator, the images of the generating sequence.
    images: Vec<Vec<Cycles>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: BTreeMap<String, Entry>,
}

/// Canonical key of an enumerated group.
pub fn group_key(t: &FiniteGroup) -> String {
    let mut h = Sha256::new();
    h.update((t.degree() as u64).to_le_bytes());
    for x in t.elements() {
        for &i in x.images() {
            h.update(i.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Shared Aut cache; in-memory always, persisted when a path is set.
pub struct AutCache {
    path: Option<PathBuf>,
    stored: Mutex<CacheFile>,
    live: Mutex<HashMap<String, Arc<AutomorphismGroup>>>,
    dirty: Mutex<bool>,
}

impl AutCache {
    pub fn in_memory() -> Self {
        AutCache {
            path: None,
            stored: Mutex::new(CacheFile { version: 1, ..Default::default() }),
            live: Mutex::new(HashMap::new()),
            dirty: Mutex::new(false),
        }
    }

    /// Opens (or starts) a cache file. An unreadable file is an input error.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let stored = if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
                message: e.to_string(),
            })?
        } else {
            CacheFile { version: 1, ..Default::default() }
        };
        Ok(AutCache {
            path: Some(path),
            stored: Mutex::new(stored),
            live: Mutex::new(HashMap::new()),
            dirty: Mutex::new(false),
        })
    }

    /// `--cache` path if given, else `$PROTOFUSION_CACHE_DIR/aut_cache.json`, else memory only.
    pub fn from_config(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::open(p),
            None => match std::env::var_os(CACHE_DIR_ENV) {
                Some(dir) => Self::open(Path::new(&dir).join(CACHE_FILE)),
                None => Ok(Self::in_memory()),
            },
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.stored.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn automorphism_group(&self, t: Arc<FiniteGroup>) -> Result<Arc<AutomorphismGroup>> {
        let key = group_key(&t);
        if let Some(a) = self.live.lock().unwrap().get(&key) {
            return Ok(a.clone());
        }
        let entry = self.stored.lock().unwrap().entries.get(&key).cloned();
        let rebuilt = entry.and_then(|e| match rebuild(&t, &e) {
            Ok(a) => Some(a),
            Err(err) => {
                log::warn!("discarding cache entry {}: {}", key, err);
                None
            }
        });
        let a = match rebuilt {
            Some(a) => a,
            None => {
                let a = automorphism_group_of(t.clone())?;
                self.stored.lock().unwrap().entries.insert(key.clone(), to_entry(&a));
                *self.dirty.lock().unwrap() = true;
                a
            }
        };
        let a = Arc::new(a);
        self.live.lock().unwrap().entry(key).or_insert_with(|| a.clone());
        Ok(a)
    }

    /// Writes the cache file if anything new was computed.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut dirty = self.dirty.lock().unwrap();
        if !*dirty {
            return Ok(());
        }
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let text = serde_json::to_string(&*self.stored.lock().unwrap()).expect("cache serialises");
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)?;
        *dirty = false;
        Ok(())
    }
}

fn to_entry(a: &AutomorphismGroup) -> Entry {
    let t = a.base();
    let seq = a.generating_sequence();
    Entry {
        degree: t.degree(),
        order: a.order(),
        generating_sequence: seq.iter().map(|&g| t.element(g).to_cycles()).collect(),
        images: a
            .generator_maps()
            .iter()
            .map(|m| seq.iter().map(|&g| t.element(m[g as usize]).to_cycles()).collect())
            .collect(),
    }
}

fn rebuild(t: &Arc<FiniteGroup>, e: &Entry) -> Result<AutomorphismGroup> {
    let index = |c: &Cycles| -> Result<u32> {
        let x = Permutation::from_cycles(t.degree(), c)?;
        t.index_of(&x).ok_or_else(|| Error::input("cached element outside the group"))
    };
    if e.degree != t.degree() {
        return Err(Error::input("cached degree mismatch"));
    }
    let seq = e.generating_sequence.iter().map(index).collect::<Result<Vec<_>>>()?;
    if FiniteGroup::size(&t.closure(&seq)) != t.order() {
        return Err(Error::input("cached generating sequence does not generate"));
    }
    let mut maps = Vec::with_capacity(e.images.len());
    for imgs in &e.images {
        let imgs = imgs.iter().map(index).collect::<Result<Vec<_>>>()?;
        let h = GroupHomomorphism::from_generator_images(t, t, &seq, &imgs)
            .filter(|h| h.is_automorphism())
            .ok_or_else(|| Error::input("cached map is not an automorphism"))?;
        maps.push(h.map().to_vec());
    }
    assemble(t.clone(), seq, maps, Some(e.order))
}
