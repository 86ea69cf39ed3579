//! Seeded samplers over the normalized slices of `DD*` and `SDD*`.
//!
//! Every sample is a pure function of `(seed, index)`. The generator is
//! ChaCha8 keyed with the seed as a little-endian `u64` in the first eight
//! key bytes (the remaining 24 bytes are zero), running on stream number
//! `index` from word position 0. Uniform reals are `(next_u64 >> 11) · 2⁻⁵³`
//! and exponentials are `−ln(1 − u)`; simplex points are normalized
//! exponentials.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use super::{Normalization, SetId};
use crate::constructions::{ExtremeCandidate, SignPattern, MAX_CANDIDATE_ORDER};
use crate::error::{Error, Result};
use crate::matcore::SymMat;

/// Number of candidates mixed into each `DD*` sample.
pub const DEFAULT_MIXTURE: usize = 4;

/// Keeps sampled off-diagonals strictly inside the 2×2 bound so that the
/// product constraint holds exactly after rounding.
const OFFDIAG_SHRINK: f64 = 1.0 - 1.0 / (1u64 << 50) as f64;

pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }

    /// Uniform on `{0, …, len − 1}` by scaling a uniform real.
    pub fn below(&mut self, len: u64) -> u64 {
        ((self.uniform() * len as f64) as u64).min(len - 1)
    }

    /// Uniform point on the standard simplex in `ℝ^k`.
    pub fn simplex(&mut self, k: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..k).map(|_| self.exponential()).collect();
        let total: f64 = e.iter().sum();
        if total == 0.0 {
            return vec![1.0 / k as f64; k];
        }
        e.into_iter().map(|v| v / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: u64,
    pub set: SetId,
    pub normalization: Normalization,
    /// Candidates per `DD*` sample.
    pub mixture: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, count: u64, set: SetId, normalization: Normalization) -> Self {
        Self {
            seed,
            count,
            set,
            normalization,
            mixture: DEFAULT_MIXTURE,
        }
    }

    pub fn with_mixture(mut self, mixture: usize) -> Self {
        self.mixture = mixture;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        if self.mixture == 0 {
            return Err(Error::InvalidArgument("mixture size must be positive".into()));
        }
        Ok(())
    }
}

/// Index-addressable sampler for one `(set, normalization)` pair.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: usize,
    seed: u64,
    set: SetId,
    normalization: Normalization,
    mixture: usize,
}

impl Sampler {
    pub fn new(cfg: &SamplerConfig, n: usize) -> Result<Self> {
        cfg.validate()?;
        let max_n = match cfg.set {
            SetId::DdStar => MAX_CANDIDATE_ORDER,
            SetId::SddStar => usize::MAX,
        };
        if n < 2 || n > max_n {
            return Err(Error::InvalidArgument(format!(
                "sampling {} needs 2 <= n{}, got {n}",
                cfg.set,
                if max_n == usize::MAX { String::new() } else { format!(" <= {max_n}") }
            )));
        }
        Ok(Self {
            n,
            seed: cfg.seed,
            set: cfg.set,
            normalization: cfg.normalization,
            mixture: cfg.mixture,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample(&self, index: u64) -> SymMat {
        let mut rng = SampleRng::new(self.seed, index);
        let x = match self.set {
            SetId::DdStar => ddt_point(&mut rng, self.n, self.mixture),
            SetId::SddStar => sdd_trace_point(&mut rng, self.n),
        };
        match self.normalization {
            Normalization::Trace => x,
            Normalization::Frobenius => x.scaled(1.0 / x.fro_norm()),
        }
    }

    /// Samples `0..count` in order.
    pub fn stream(&self, count: u64) -> impl Iterator<Item = SymMat> + '_ {
        (0..count).map(move |i| self.sample(i))
    }
}

fn random_candidate(rng: &mut SampleRng, n: usize) -> ExtremeCandidate {
    let q = rng.below(n as u64) as usize + 1;
    let bits = rng.next_u64();
    ExtremeCandidate::new(n, q, SignPattern::from_bits(bits, n - 1)).expect("valid candidate")
}

/// Convex combination of `m` random vertex candidates of the unit-trace
/// slice of `DD*` with simplex-uniform weights.
fn ddt_point(rng: &mut SampleRng, n: usize, m: usize) -> SymMat {
    let candidates: Vec<SymMat> = (0..m).map(|_| random_candidate(rng, n).realize()).collect();
    let weights = rng.simplex(m);
    let mut acc = SymMat::zeros(n);
    for (c, w) in candidates.iter().zip(weights) {
        acc = &acc + &c.scaled(w);
    }
    acc
}

/// Unit-trace `SDD*` point: simplex-uniform diagonal, each off-diagonal
/// uniform in `[−√(X_ii X_jj), √(X_ii X_jj)]`.
fn sdd_trace_point(rng: &mut SampleRng, n: usize) -> SymMat {
    let d = rng.simplex(n);
    let mut off = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let u = 2.0 * rng.uniform() - 1.0;
            off[i * n + j] = u * OFFDIAG_SHRINK * (d[i] * d[j]).sqrt();
        }
    }
    SymMat::from_fn(n, |i, j| if i == j { d[i] } else { off[i * n + j] })
}

fn trace_cfg(cfg: &SamplerConfig, set: SetId, norm: Normalization) -> SamplerConfig {
    SamplerConfig {
        set,
        normalization: norm,
        ..*cfg
    }
}

/// `cfg.count` points of the unit-trace slice of `DD*`.
pub fn sample_ddt(cfg: &SamplerConfig, n: usize) -> Result<impl Iterator<Item = SymMat>> {
    let s = Sampler::new(&trace_cfg(cfg, SetId::DdStar, Normalization::Trace), n)?;
    let count = cfg.count;
    Ok((0..count).map(move |i| s.sample(i)))
}

/// `cfg.count` points of the unit-trace slice of `SDD*`.
pub fn sample_sdd_trace(cfg: &SamplerConfig, n: usize) -> Result<impl Iterator<Item = SymMat>> {
    let s = Sampler::new(&trace_cfg(cfg, SetId::SddStar, Normalization::Trace), n)?;
    let count = cfg.count;
    Ok((0..count).map(move |i| s.sample(i)))
}

/// `cfg.count` points of `DD*` with unit Frobenius norm, obtained by
/// rescaling unit-trace samples.
pub fn sample_dd_frobenius(cfg: &SamplerConfig, n: usize) -> Result<impl Iterator<Item = SymMat>> {
    let s = Sampler::new(&trace_cfg(cfg, SetId::DdStar, Normalization::Frobenius), n)?;
    let count = cfg.count;
    Ok((0..count).map(move |i| s.sample(i)))
}
