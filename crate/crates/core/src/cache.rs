//! Factorization with an optional on-disk cache.
//!
//! The cache is a JSON-lines file; each line holds one factorization keyed
//! by the ring tag and the element's basis coordinates. Entries are
//! idempotent, so concurrent readers and writers only need the map lock.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorint::FactorBudget;
use crate::prime::{ElementFactorization, PrimeElement};
use crate::ring::NumberRing;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CachedPrime {
    pi: Vec<String>,
    p: String,
    e: u32,
    f: u32,
    exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CacheLine {
    m: i64,
    element: Vec<String>,
    unit: Vec<String>,
    factors: Vec<CachedPrime>,
}

type Key = (i64, Vec<String>);

#[derive(Debug)]
pub struct FactorCache {
    path: PathBuf,
    entries: Mutex<HashMap<Key, CacheLine>>,
    writer: Mutex<File>,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

fn ints(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|s| s.parse().map_err(|_| Error::Cache(format!("bad integer `{s}`"))))
        .collect()
}

impl FactorCache {
    /// Opens (creating if needed) the cache file and loads its entries.
    pub fn open(path: impl AsRef<Path>) -> Result<FactorCache> {
        let path = path.as_ref().to_path_buf();
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CacheLine = serde_json::from_str(&line)
                    .map_err(|e| Error::Cache(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
                entries.insert((entry.m, entry.element.clone()), entry);
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        Ok(FactorCache {
            path,
            entries: Mutex::new(entries),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get<R: NumberRing>(&self, ring: &R, a: &R::Elem) -> Result<Option<ElementFactorization<R::Elem>>> {
        let key = (ring.tag(), strings(&ring.coords(a)));
        let line = match self.entries.lock().unwrap().get(&key) {
            Some(l) => l.clone(),
            None => return Ok(None),
        };
        let mut factors = Vec::with_capacity(line.factors.len());
        for f in &line.factors {
            let p: BigInt = f.p.parse().map_err(|_| Error::Cache(format!("bad prime `{}`", f.p)))?;
            factors.push((
                PrimeElement {
                    pi: ring.from_coords(&ints(&f.pi)?),
                    p,
                    f: f.f,
                    e: f.e,
                },
                f.exponent,
            ));
        }
        Ok(Some(ElementFactorization {
            unit: ring.from_coords(&ints(&line.unit)?),
            factors,
        }))
    }

    fn insert<R: NumberRing>(&self, ring: &R, a: &R::Elem, fac: &ElementFactorization<R::Elem>) -> Result<()> {
        let element = strings(&ring.coords(a));
        let line = CacheLine {
            m: ring.tag(),
            element: element.clone(),
            unit: strings(&ring.coords(&fac.unit)),
            factors: fac
                .factors
                .iter()
                .map(|(q, k)| CachedPrime {
                    pi: strings(&ring.coords(&q.pi)),
                    p: q.p.to_string(),
                    e: q.e,
                    f: q.f,
                    exponent: *k,
                })
                .collect(),
        };
        let mut entries = self.entries.lock().unwrap();
        if entries.contains_key(&(line.m, element.clone())) {
            return Ok(());
        }
        let text = serde_json::to_string(&line).map_err(|e| Error::Cache(e.to_string()))?;
        {
            let mut w = self.writer.lock().unwrap();
            writeln!(w, "{text}").map_err(|e| Error::Cache(e.to_string()))?;
        }
        entries.insert((line.m, element), line);
        Ok(())
    }
}

/// Factoring settings shared by the scan and the CLI.
#[derive(Debug, Clone, Copy, Default)]
pub struct Factorizer<'a> {
    pub budget: FactorBudget,
    pub cache: Option<&'a FactorCache>,
}

impl<'a> Factorizer<'a> {
    pub fn new(budget: FactorBudget) -> Factorizer<'a> {
        Factorizer { budget, cache: None }
    }

    pub fn with_cache(mut self, cache: &'a FactorCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn factor<R: NumberRing>(&self, ring: &R, a: &R::Elem) -> Result<ElementFactorization<R::Elem>> {
        if let Some(cache) = self.cache {
            if let Some(hit) = cache.get(ring, a)? {
                return Ok(hit);
            }
            let fac = ring.factor(a, &self.budget)?;
            cache.insert(ring, a, &fac)?;
            return Ok(fac);
        }
        ring.factor(a, &self.budget)
    }
}
