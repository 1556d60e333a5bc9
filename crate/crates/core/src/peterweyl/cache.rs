//! Content-addressed store for Clebsch–Gordan data of `V_lambda ⊗ V_mu`.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::repr::{decompose, matrix_from_json, matrix_json, tensor, CgDecomposition, Registry, Summand};
use crate::scalars::Field;

/// Bumped whenever cached content would change.
pub const CODE_VERSION: &str = "qflag-cg-1";
const FORMAT: &str = "qflag-structure-cache";

/// Counters of where decompositions came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub memory_hits: usize,
    pub disk_hits: usize,
    pub computed: usize,
}

/// In-memory map with optional persistence in a directory, one JSON file per
/// pair. Concurrent readers, exclusive idempotent inserts.
pub struct StructureCache<F: Field> {
    dir: Option<PathBuf>,
    mem: RwLock<HashMap<(Weight, Weight), Arc<CgDecomposition<F>>>>,
    memory_hits: AtomicUsize,
    disk_hits: AtomicUsize,
    computed: AtomicUsize,
}

impl<F: Field> StructureCache<F> {
    pub fn in_memory() -> Self {
        Self::with_dir(None)
    }

    pub fn persistent(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self::with_dir(Some(dir)))
    }

    fn with_dir(dir: Option<PathBuf>) -> Self {
        StructureCache {
            dir,
            mem: RwLock::new(HashMap::new()),
            memory_hits: AtomicUsize::new(0),
            disk_hits: AtomicUsize::new(0),
            computed: AtomicUsize::new(0),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            memory_hits: self.memory_hits.load(Ordering::Relaxed),
            disk_hits: self.disk_hits.load(Ordering::Relaxed),
            computed: self.computed.load(Ordering::Relaxed),
        }
    }

    /// Decomposition of `V_lambda ⊗ V_mu`.
    pub fn get(&self, reg: &Registry<F>, lambda: &Weight, mu: &Weight) -> Result<Arc<CgDecomposition<F>>> {
        let key = (lambda.clone(), mu.clone());
        if let Some(d) = self.mem.read().get(&key) {
            self.memory_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(d.clone());
        }
        let d = match self.load(reg, lambda, mu)? {
            Some(d) => {
                self.disk_hits.fetch_add(1, Ordering::Relaxed);
                d
            }
            None => {
                let a = reg.module(lambda)?;
                let b = reg.module(mu)?;
                let d = decompose(&tensor(&a, &b)?, reg)?;
                self.computed.fetch_add(1, Ordering::Relaxed);
                self.store(reg, lambda, mu, &d)?;
                d
            }
        };
        let d = Arc::new(d);
        Ok(self.mem.write().entry(key).or_insert(d).clone())
    }

    fn header(reg: &Registry<F>, lambda: &Weight, mu: &Weight) -> Value {
        json!({
            "format": FORMAT,
            "code_version": CODE_VERSION,
            "type": reg.ty.name(),
            "l": reg.params.l,
            "mode": reg.params.mode_label(),
            "lambda": lambda.0,
            "mu": mu.0,
        })
    }

    /// Hex sha256 of the header, the file stem for the pair.
    pub fn content_key(reg: &Registry<F>, lambda: &Weight, mu: &Weight) -> String {
        let h = Sha256::digest(Self::header(reg, lambda, mu).to_string().as_bytes());
        hex::encode(h)
    }

    fn path(&self, reg: &Registry<F>, lambda: &Weight, mu: &Weight) -> Option<PathBuf> {
        let d = self.dir.as_ref()?;
        Some(d.join(format!("{}.json", Self::content_key(reg, lambda, mu))))
    }

    fn load(&self, reg: &Registry<F>, lambda: &Weight, mu: &Weight) -> Result<Option<CgDecomposition<F>>> {
        let Some(path) = self.path(reg, lambda, mu) else {
            return Ok(None);
        };
        if !path.exists() {
            return Ok(None);
        }
        let v: Value = serde_json::from_slice(&fs::read(&path)?)?;
        if v["header"] != Self::header(reg, lambda, mu) {
            return Err(Error::Cache(format!("{} has a mismatched header", path.display())));
        }
        let bad = || Error::Cache(format!("{} is malformed", path.display()));
        let mut summands = Vec::new();
        for s in v["summands"].as_array().ok_or_else(bad)? {
            let nu = Weight(
                s["highest"]
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(bad))
                    .collect::<Result<_>>()?,
            );
            let module = reg.module(&nu)?;
            let embed = matrix_from_json(&s["embed"])?;
            let proj = matrix_from_json(&s["proj"])?;
            if embed.ncols() != module.dim() || proj.nrows() != module.dim() {
                return Err(bad());
            }
            summands.push(Summand { highest: nu, module, embed, proj });
        }
        Ok(Some(CgDecomposition { summands }))
    }

    fn store(&self, reg: &Registry<F>, lambda: &Weight, mu: &Weight, d: &CgDecomposition<F>) -> Result<()> {
        let Some(path) = self.path(reg, lambda, mu) else {
            return Ok(());
        };
        let doc = json!({
            "header": Self::header(reg, lambda, mu),
            "summands": d.summands.iter().map(|s| json!({
                "highest": s.highest.0,
                "embed": matrix_json(&s.embed),
                "proj": matrix_json(&s.proj),
            })).collect::<Vec<_>>(),
        });
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&doc)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cache files in the directory, sorted.
    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        let Some(d) = &self.dir else {
            return Ok(Vec::new());
        };
        let mut out: Vec<PathBuf> = fs::read_dir(d)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Remove all cache files; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let files = self.entries()?;
        for f in &files {
            fs::remove_file(f)?;
        }
        self.mem.write().clear();
        Ok(files.len())
    }
}
