//! Plain-text coefficient cache.
//!
//! One file per `(kind, weight, prec)`, named `<kind>-k<weight>-p<prec>.txt`.
//! The first line is `v1 <kind> <weight> <prec>`, followed by one decimal
//! integer per line. A basis file holds its forms one after another, each
//! contributing `prec + 1` lines.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use super::basis::{cusp_dimension, CuspBasis, LevelOneRing};
use super::qexp::{delta, eisenstein, QExpansion};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "v1";

/// What a cache file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CacheKind {
    E4,
    E6,
    Delta,
    Basis,
}

impl CacheKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CacheKind::E4 => "e4",
            CacheKind::E6 => "e6",
            CacheKind::Delta => "delta",
            CacheKind::Basis => "basis",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoefficientCache {
    dir: PathBuf,
}

impl CoefficientCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Cache(format!("cannot create {}: {e}", dir.display())))?;
        Ok(CoefficientCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: CacheKind, weight: u32, prec: usize) -> PathBuf {
        self.dir
            .join(format!("{}-k{weight}-p{prec}.txt", kind.tag()))
    }

    /// Coefficients stored for `(kind, weight, prec)`, if present and well formed.
    pub fn load(&self, kind: CacheKind, weight: u32, prec: usize) -> Result<Option<Vec<BigInt>>> {
        let path = self.path(kind, weight, prec);
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let mut lines = BufReader::new(file).lines();
        let header = match lines.next() {
            Some(Ok(h)) => h,
            _ => return Err(Error::Cache(format!("{}: missing header", path.display()))),
        };
        let expected = format!("{FORMAT_VERSION} {} {weight} {prec}", kind.tag());
        if header.trim() != expected {
            return Err(Error::Cache(format!(
                "{}: header {header:?}, expected {expected:?}",
                path.display()
            )));
        }
        let mut out = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            let value = line
                .trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Cache(format!("{}: bad integer {line:?}: {e}", path.display())))?;
            out.push(value);
        }
        Ok(Some(out))
    }

    pub fn store(&self, kind: CacheKind, weight: u32, prec: usize, coefficients: &[BigInt]) -> Result<()> {
        let path = self.path(kind, weight, prec);
        let tmp = path.with_extension("tmp");
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
        {
            let mut w = BufWriter::new(fs::File::create(&tmp).map_err(io)?);
            writeln!(w, "{FORMAT_VERSION} {} {weight} {prec}", kind.tag()).map_err(io)?;
            for c in coefficients {
                writeln!(w, "{c}").map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(())
    }

    /// A single q-expansion (`E_4`, `E_6` or `Delta`), computed on a miss.
    pub fn series(&self, kind: CacheKind, prec: usize) -> Result<QExpansion> {
        let weight = match kind {
            CacheKind::E4 => 4,
            CacheKind::E6 => 6,
            CacheKind::Delta => 12,
            CacheKind::Basis => {
                return Err(Error::Cache("use CoefficientCache::basis for bases".into()))
            }
        };
        if let Some(c) = self.load(kind, weight, prec)? {
            if c.len() == prec + 1 {
                return Ok(QExpansion::new(weight, c));
            }
            return Err(Error::Cache(format!("{}: wrong length", self.path(kind, weight, prec).display())));
        }
        let q = match kind {
            CacheKind::E4 | CacheKind::E6 => eisenstein(weight, prec)?,
            _ => delta(prec),
        };
        self.store(kind, weight, prec, q.coefficients())?;
        Ok(q)
    }

    /// Echelon basis of `S_k(1)`, computed with `ring` on a miss.
    pub fn basis(&self, ring: &LevelOneRing, k: u32) -> Result<CuspBasis> {
        let prec = ring.prec();
        if let Some(flat) = self.load(CacheKind::Basis, k, prec)? {
            let dim = cusp_dimension(k);
            if flat.len() != dim * (prec + 1) {
                return Err(Error::Cache(format!(
                    "{}: {} coefficients, expected {}",
                    self.path(CacheKind::Basis, k, prec).display(),
                    flat.len(),
                    dim * (prec + 1)
                )));
            }
            let forms = flat
                .chunks(prec + 1)
                .map(|c| QExpansion::new(k, c.to_vec()))
                .collect();
            return CuspBasis::from_forms(k, forms);
        }
        let basis = ring.cuspform_basis(k)?;
        let flat: Vec<BigInt> = basis
            .forms()
            .iter()
            .flat_map(|f| f.coefficients().iter().cloned())
            .collect();
        self.store(CacheKind::Basis, k, prec, &flat)?;
        Ok(basis)
    }
}
