//! On-disk cache of figure eight colored Jones values, one JSON file per index.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use qknot::exact_poly::{MultiPoly, Substitution, Var, Vars};
use qknot::jones::{degrees, degrees_fig8, fig8, jones_fig8, KnotSequence};
use qknot::serialize::{from_json, to_json};
use serde::{Deserialize, Serialize};

pub const ENV_VAR: &str = "QKNOT_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    n: i64,
    value: MultiPoly,
}

/// Why a cache file was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Missing,
    Corrupt(String),
}

#[derive(Debug)]
pub struct JonesCache {
    dir: Option<PathBuf>,
    on_disk: BTreeSet<i64>,
}

impl JonesCache {
    pub fn in_memory() -> JonesCache {
        JonesCache { dir: None, on_disk: BTreeSet::new() }
    }

    /// Uses `flag` if given, else `QKNOT_CACHE_DIR`, else memory only.
    pub fn configure(flag: Option<PathBuf>) -> JonesCache {
        let dir = flag.or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from));
        match dir {
            Some(d) => JonesCache::at(d),
            None => JonesCache::in_memory(),
        }
    }

    pub fn at(dir: PathBuf) -> JonesCache {
        if let Err(e) = fs::create_dir_all(&dir) {
            warn!("cache directory {} is unusable ({e}); continuing in memory", dir.display());
            return JonesCache::in_memory();
        }
        JonesCache { dir: Some(dir), on_disk: BTreeSet::new() }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, n: i64) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("fig8_{n}.json")))
    }

    /// Reads and validates the entry for `n`.
    pub fn load(&self, n: i64) -> Result<MultiPoly, LoadError> {
        let path = self.path(n).ok_or(LoadError::Missing)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(LoadError::Missing),
            Err(e) => return Err(LoadError::Corrupt(e.to_string())),
        };
        let entry: Entry = from_json(&text).map_err(|e| LoadError::Corrupt(e.to_string()))?;
        if entry.n != n {
            return Err(LoadError::Corrupt(format!("entry records n = {}", entry.n)));
        }
        if to_json(&entry) != text {
            return Err(LoadError::Corrupt("not in canonical form".into()));
        }
        validate(n, &entry.value).map_err(LoadError::Corrupt)?;
        Ok(entry.value)
    }

    /// Writes the entry for `n` through a temporary file and a rename.
    pub fn store(&mut self, n: i64, v: &MultiPoly) {
        let Some(dir) = self.dir.clone() else { return };
        let text = to_json(&Entry { n, value: v.clone() });
        let res = tempfile::NamedTempFile::new_in(&dir).and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.as_file().sync_all()?;
            f.persist(dir.join(format!("fig8_{n}.json"))).map_err(|e| e.error)?;
            Ok(())
        });
        match res {
            Ok(()) => {
                self.on_disk.insert(n);
            }
            Err(e) => {
                warn!("cannot write to cache directory {} ({e}); continuing in memory", dir.display());
                self.dir = None;
            }
        }
    }

    /// `J_{E,n}` from the cache, or computed, stored and returned.
    pub fn get(&mut self, n: i64) -> MultiPoly {
        if n <= 0 {
            return jones_fig8(n);
        }
        match self.load(n) {
            Ok(v) => {
                self.on_disk.insert(n);
                return v;
            }
            Err(LoadError::Corrupt(why)) => warn!("discarding cache entry for n = {n}: {why}"),
            Err(LoadError::Missing) => {}
        }
        let v = jones_fig8(n);
        self.store(n, &v);
        v
    }

    /// Seeds `seq` with every valid entry in the directory and warns about corrupt ones.
    pub fn warm(&mut self, seq: &KnotSequence) {
        let Some(dir) = self.dir.clone() else { return };
        let Ok(rd) = fs::read_dir(&dir) else { return };
        let mut ns: Vec<i64> = rd
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_prefix("fig8_")?.strip_suffix(".json")?.parse().ok()
            })
            .filter(|n| *n > 0)
            .collect();
        ns.sort_unstable();
        for n in ns {
            match self.load(n) {
                Ok(v) => {
                    seq.seed(n, v);
                    self.on_disk.insert(n);
                }
                Err(LoadError::Corrupt(why)) => warn!("discarding cache entry for n = {n}: {why}"),
                Err(LoadError::Missing) => {}
            }
        }
    }

    /// Writes every memoized positive index of `seq` not already on disk.
    pub fn persist(&mut self, seq: &KnotSequence) {
        for (n, v) in seq.snapshot() {
            if self.dir.is_none() {
                return;
            }
            if n > 0 && !self.on_disk.contains(&n) {
                self.store(n, &v);
            }
        }
    }
}

/// Loads cached entries into the shared figure eight sequence.
pub fn warm_shared(cache: &mut JonesCache) {
    cache.warm(fig8());
}

pub fn persist_shared(cache: &mut JonesCache) {
    cache.persist(fig8());
}

/// Checks a stored `J_{E,n}`: a Laurent polynomial in `t` alone, invariant
/// under `t -> t^-1`, equal to `n` at `t = 1`, with the predicted degrees.
pub fn validate(n: i64, v: &MultiPoly) -> Result<(), String> {
    if v.vars() != Vars::TM || v.involves(Var::M) {
        return Err("value must be a polynomial in t alone".into());
    }
    if !v.has_integer_coeffs() {
        return Err("non-integer coefficients".into());
    }
    if v.substitute(Substitution::Monomial { var: Var::T, a: 0, b: -1 }) != *v {
        return Err("value is not symmetric under t -> t^-1".into());
    }
    if v.substitute(Substitution::Collapse { var: Var::T, k: 0 }) != MultiPoly::integer(Vars::TM, n) {
        return Err(format!("value at t = 1 is not {n}"));
    }
    let expected = degrees_fig8(n).map_err(|e| e.to_string())?;
    if degrees(v).map_err(|e| e.to_string())? != expected {
        return Err("degrees disagree with the closed form".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_tampering() {
        let v = jones_fig8(4);
        assert!(validate(4, &v).is_ok());
        assert!(validate(3, &v).is_err());
        assert!(validate(4, &(&v + &MultiPoly::ints(Vars::TM, &[(2, 0, 1), (-2, 0, -1)]))).is_err());
        assert!(validate(4, &v.shift(4, 0)).is_err());
        assert!(validate(4, &v.shift(0, 1)).is_err());
    }
}
