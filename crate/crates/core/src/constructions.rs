//! Special matrices: the `G(a, b, n)` family, the star matrices that realize
//! the vertex candidates of the unit-trace slice of `DD*`, and the PSD
//! certificate matrices assembled from 2×2 principal blocks.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::SymMat;

/// Largest order accepted by [`enumerate_candidates`]; `20 · 2^19` candidates.
pub const MAX_CANDIDATE_ORDER: usize = 20;

/// `G(a, b, n) = (a + b)I − a·eeᵀ`: diagonal `b`, off-diagonal `−a`.
pub fn make_g(a: f64, b: f64, n: usize) -> Result<SymMat> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("a and b must be finite".into()));
    }
    Ok(SymMat::from_fn(n, |i, j| if i == j { b } else { -a }))
}

/// Spectrum of `G(a, b, n)` as `(eigenvalue, multiplicity)` pairs in
/// ascending order: `a + b` with multiplicity `n − 1` and `b − (n − 1)a`
/// once, merged when they coincide.
pub fn g_spectrum(a: f64, b: f64, n: usize) -> Result<Vec<(f64, usize)>> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    let bulk = a + b;
    let single = b - (n as f64 - 1.0) * a;
    Ok(if bulk == single {
        vec![(bulk, n)]
    } else if single < bulk {
        vec![(single, 1), (bulk, n - 1)]
    } else {
        vec![(bulk, n - 1), (single, 1)]
    })
}

/// `G(1/n, 1/n, n)`: unit trace and unit Frobenius norm, on the boundary of
/// `SDD*`, at distance `(n − 2)/n` from the PSD cone.
pub fn sdd_trace_worst(n: usize) -> Result<SymMat> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    let t = 1.0 / n as f64;
    make_g(t, t, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn half(self) -> f64 {
        match self {
            Sign::Plus => 0.5,
            Sign::Minus => -0.5,
        }
    }
}

/// A string over `{+, -}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct SignPattern(pub Vec<Sign>);

impl SignPattern {
    pub fn all_plus(len: usize) -> Self {
        Self(vec![Sign::Plus; len])
    }

    /// Bit `k` of `bits` set means position `k` is `-`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Self(
            (0..len)
                .map(|k| if bits >> k & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl From<SignPattern> for String {
    fn from(p: SignPattern) -> String {
        p.to_string()
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::InvalidArgument(format!(
                    "sign pattern may only contain '+' and '-', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignPattern)
    }
}

/// A unit-trace `DD*` matrix with a single unit diagonal entry at `q`,
/// `±½` on the rest of row/column `q`, and zeros elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExtremeCandidate {
    n: usize,
    /// 1-based.
    q: usize,
    /// Signs of `X_iq` for `i ≠ q`, in increasing `i`.
    signs: SignPattern,
}

impl ExtremeCandidate {
    pub fn new(n: usize, q: usize, signs: SignPattern) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("n must be >= 2".into()));
        }
        if !(1..=n).contains(&q) {
            return Err(Error::InvalidArgument(format!("q must lie in 1..={n}, got {q}")));
        }
        if signs.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "sign pattern must have length {}, got {}",
                n - 1,
                signs.len()
            )));
        }
        Ok(Self { n, q, signs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn signs(&self) -> &SignPattern {
        &self.signs
    }

    pub fn realize(&self) -> SymMat {
        let q = self.q - 1;
        let mut off = vec![0.0; self.n];
        let others = (0..self.n).filter(|&i| i != q);
        for (i, s) in others.zip(&self.signs.0) {
            off[i] = s.half();
        }
        SymMat::from_fn(self.n, |i, j| {
            if i == q && j == q {
                1.0
            } else if j == q {
                off[i]
            } else if i == q {
                off[j]
            } else {
                0.0
            }
        })
    }
}

/// Deterministic walk over all `n · 2^(n−1)` candidates: `q` ascending, and
/// for each `q` the sign pattern counts up as a little-endian binary number
/// (bit set = `-`).
///
/// Indices are stable, so a range can be split and consumed independently.
#[derive(Debug, Clone)]
pub struct CandidateIter {
    n: usize,
    range: Range<u64>,
}

impl CandidateIter {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(n: usize) -> u64 {
        n as u64 * (1u64 << (n - 1))
    }

    /// The candidate at position `index` in the full enumeration order.
    pub fn at(&self, index: u64) -> ExtremeCandidate {
        let per_q = 1u64 << (self.n - 1);
        let q = (index / per_q) as usize + 1;
        let bits = index % per_q;
        ExtremeCandidate {
            n: self.n,
            q,
            signs: SignPattern::from_bits(bits, self.n - 1),
        }
    }

    /// Splits the remaining range at absolute position `mid`.
    pub fn split_at(self, mid: u64) -> (CandidateIter, CandidateIter) {
        let mid = mid.clamp(self.range.start, self.range.end);
        (
            CandidateIter {
                n: self.n,
                range: self.range.start..mid,
            },
            CandidateIter {
                n: self.n,
                range: mid..self.range.end,
            },
        )
    }
}

impl Iterator for CandidateIter {
    type Item = ExtremeCandidate;

    fn next(&mut self) -> Option<ExtremeCandidate> {
        let i = self.range.next()?;
        Some(self.at(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.range.size_hint()
    }
}

impl ExactSizeIterator for CandidateIter {}

pub fn enumerate_candidates(n: usize) -> Result<CandidateIter> {
    if !(2..=MAX_CANDIDATE_ORDER).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "candidate enumeration needs 2 <= n <= {MAX_CANDIDATE_ORDER}, got {n}"
        )));
    }
    Ok(CandidateIter {
        n,
        range: 0..CandidateIter::total(n),
    })
}

/// Candidate with `q = n`: zeros except the last row/column.
pub fn make_star(n: usize, signs: &SignPattern) -> Result<SymMat> {
    Ok(ExtremeCandidate::new(n, n, signs.clone())?.realize())
}

fn require_order(x: &SymMat, min: usize) -> Result<()> {
    if x.n() < min {
        return Err(Error::Precondition(format!("order must be >= {min}, got {}", x.n())));
    }
    Ok(())
}

/// Mean over all pairs `i < j` of the matrices that keep only the 2×2
/// principal block `{i, j}` of `X`. Diagonal entries scale by `2/n`,
/// off-diagonal by `2/(n(n−1))`. PSD whenever `X ∈ SDD*`.
pub fn sdd_tilde(x: &SymMat) -> Result<SymMat> {
    require_order(x, 3)?;
    let n = x.n() as f64;
    let diag = 2.0 / n;
    let off = 2.0 / (n * (n - 1.0));
    Ok(SymMat::from_fn(x.n(), |i, j| {
        x.get(i, j) * if i == j { diag } else { off }
    }))
}

/// Mean over all pairs `i < j` of the matrices whose 2×2 block `{i, j}` has
/// both diagonal entries `(X_ii + X_jj)/2` and off-diagonal `X_ij`. PSD
/// whenever `X ∈ DD*`.
pub fn dd_bar(x: &SymMat) -> Result<SymMat> {
    require_order(x, 3)?;
    let n = x.n() as f64;
    let pairs = n * (n - 1.0) / 2.0;
    let tr = x.trace();
    Ok(SymMat::from_fn(x.n(), |i, j| {
        if i == j {
            ((n - 2.0) / 2.0 * x.get(i, i) + tr / 2.0) / pairs
        } else {
            x.get(i, j) / pairs
        }
    }))
}
