//! Binary space file.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic            8 bytes   "LSASPACE"
//! version          u32       FORMAT_VERSION
//! k                u64
//! n_terms          u64
//! n_docs           u64
//! min_count        u64
//! seed             u64
//! scaling          u8        0 = sigma, 1 = none
//! weighting        u8        0 = log-entropy
//! solver           u8        0 = auto, 1 = dense, 2 = randomized
//! oversample       u64       randomized solver only, else 0
//! power_iterations u64       randomized solver only, else 0
//! singular values  k × f64
//! n_terms records:
//!   term length    u32, then UTF-8 bytes
//!   tf_total       u64
//!   df             u64
//!   global_weight  f64
//!   vector         k × f64
//! ```

use std::collections::HashMap;

use thiserror::Error;

use super::space::{BuildConfig, Scaling, SemanticSpace};
use super::svd::Solver;
use super::weighting::{TermStats, Weighting};

pub const MAGIC: &[u8; 8] = b"LSASPACE";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("bad header: not a space file")]
    BadMagic,
    #[error("unsupported space format version {found} (expected {FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("truncated space file")]
    Truncated,
    #[error("invalid space file: {0}")]
    Invalid(String),
}

pub fn save_space(s: &SemanticSpace) -> Vec<u8> {
    let k = s.k();
    let mut out = Vec::with_capacity(64 + s.vectors.len() * 8 + s.vocab.len() * 40);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [k as u64, s.vocab.len() as u64, s.n_docs, s.config.min_count, s.config.seed] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.push(match s.config.scaling {
        Scaling::Sigma => 0,
        Scaling::None => 1,
    });
    out.push(match s.config.weighting {
        Weighting::LogEntropy => 0,
    });
    let (tag, over, power) = match s.config.solver {
        Solver::Auto => (0u8, 0u64, 0u64),
        Solver::Dense => (1, 0, 0),
        Solver::Randomized {
            oversample,
            power_iterations,
        } => (2, oversample as u64, power_iterations as u64),
    };
    out.push(tag);
    out.extend_from_slice(&over.to_le_bytes());
    out.extend_from_slice(&power.to_le_bytes());
    for sv in &s.singular_values {
        out.extend_from_slice(&sv.to_le_bytes());
    }
    for (i, st) in s.term_stats.iter().enumerate() {
        let bytes = st.term.as_bytes();
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(bytes);
        out.extend_from_slice(&st.tf_total.to_le_bytes());
        out.extend_from_slice(&st.df.to_le_bytes());
        out.extend_from_slice(&st.global_weight.to_le_bytes());
        for x in &s.vectors[i * k..(i + 1) * k] {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(n).ok_or(FormatError::Truncated)?;
        let slice = self.buf.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, FormatError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize, FormatError> {
        usize::try_from(self.u64()?).map_err(|_| FormatError::Invalid("size overflow".into()))
    }
}

pub fn load_space(bytes: &[u8]) -> Result<SemanticSpace, FormatError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(MAGIC.len()).map_err(|_| FormatError::BadMagic)? != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion { found: version });
    }
    let k = r.usize()?;
    let n_terms = r.usize()?;
    let n_docs = r.u64()?;
    let min_count = r.u64()?;
    let seed = r.u64()?;
    let scaling = match r.u8()? {
        0 => Scaling::Sigma,
        1 => Scaling::None,
        t => return Err(FormatError::Invalid(format!("scaling tag {t}"))),
    };
    let weighting = match r.u8()? {
        0 => Weighting::LogEntropy,
        t => return Err(FormatError::Invalid(format!("weighting tag {t}"))),
    };
    let tag = r.u8()?;
    let oversample = r.usize()?;
    let power_iterations = r.usize()?;
    let solver = match tag {
        0 => Solver::Auto,
        1 => Solver::Dense,
        2 => Solver::Randomized {
            oversample,
            power_iterations,
        },
        t => return Err(FormatError::Invalid(format!("solver tag {t}"))),
    };
    // every record needs at least 28 bytes plus its vector
    let min_record = 28usize.saturating_add(k.saturating_mul(8));
    if n_terms.saturating_mul(min_record) > bytes.len() {
        return Err(FormatError::Truncated);
    }
    let singular_values = (0..k).map(|_| r.f64()).collect::<Result<Vec<_>, _>>()?;
    let mut vocab = Vec::with_capacity(n_terms);
    let mut term_stats = Vec::with_capacity(n_terms);
    let mut vectors = Vec::with_capacity(n_terms * k);
    for _ in 0..n_terms {
        let len = r.u32()? as usize;
        let term = std::str::from_utf8(r.take(len)?)
            .map_err(|e| FormatError::Invalid(e.to_string()))?
            .to_string();
        let tf_total = r.u64()?;
        let df = r.u64()?;
        let global_weight = r.f64()?;
        for _ in 0..k {
            vectors.push(r.f64()?);
        }
        vocab.push(term.clone());
        term_stats.push(TermStats {
            term,
            tf_total,
            df,
            global_weight,
        });
    }
    if r.pos != bytes.len() {
        return Err(FormatError::Invalid(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    let index: HashMap<String, usize> = vocab.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    if index.len() != vocab.len() {
        return Err(FormatError::Invalid("duplicate vocabulary entry".into()));
    }
    Ok(SemanticSpace {
        vocab,
        index,
        vectors,
        singular_values,
        term_stats,
        config: BuildConfig {
            k,
            min_count,
            seed,
            scaling,
            weighting,
            solver,
        },
        n_docs,
    })
}
