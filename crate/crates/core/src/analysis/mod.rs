//! Distances from `DD*` and `SDD*` to the PSD cone under trace and Frobenius
//! normalization: exact values from witnesses and vertex enumeration,
//! sampled upper-bound checks, certificate verification, and the closed-form
//! bounds for the k-PSD closure.

mod sampling;
mod verify;

use std::fmt;

use serde::Serialize;

pub use sampling::{
    sample_dd_frobenius, sample_ddt, sample_sdd_trace, SampleRng, Sampler, SamplerConfig,
    DEFAULT_MIXTURE,
};
pub use verify::{rows_to_csv, rows_to_json, verify_theorem, ReportRow, Theorem, CSV_HEADER};

use crate::cones::{dd_star_contains, default_tol, sdd_star_contains};
use crate::constructions::{dd_bar, enumerate_candidates, sdd_tilde, sdd_trace_worst};
use crate::error::{Error, Result};
use crate::matcore::{psd_distance, SymMat};

/// Slack allowed whenever a computed distance is compared with a theorem value.
pub const THEOREM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetId {
    DdStar,
    SddStar,
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetId::DdStar => "dd-star",
            SetId::SddStar => "sdd-star",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Trace,
    Frobenius,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Trace => "trace",
            Normalization::Frobenius => "frobenius",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumeration,
    Witness,
    Sampling,
}

/// Max/min over a finite family (enumerated candidates or samples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: u64,
    pub max: f64,
    /// Index of the first maximizer.
    pub argmax: u64,
    pub min: f64,
}

impl Stats {
    fn from_values(values: impl IntoIterator<Item = f64>) -> Option<Stats> {
        let mut it = values.into_iter();
        let first = it.next()?;
        let mut s = Stats {
            count: 1,
            max: first,
            argmax: 0,
            min: first,
        };
        for (i, v) in it.enumerate() {
            if v > s.max {
                s.max = v;
                s.argmax = i as u64 + 1;
            }
            s.min = s.min.min(v);
            s.count += 1;
        }
        Some(s)
    }

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub set: SetId,
    pub normalization: Normalization,
    pub value: f64,
    /// Matrix attaining `value`; absent for sampled reports.
    pub witness: Option<SymMat>,
    pub method: Method,
    pub stats: Option<Stats>,
    /// Closed-form value of the supremum, where one is known.
    pub theory: Option<f64>,
}

/// `(√n − 1)/2`.
pub fn dd_star_trace_theory(n: usize) -> f64 {
    ((n as f64).sqrt() - 1.0) / 2.0
}

/// `(n − 2)/n`; the trace-normalized distance of `SDD*` and, for `n ≥ 4`,
/// the norm-normalized distance of both `DD*` and `SDD*`.
pub fn two_by_two_theory(n: usize) -> f64 {
    (n as f64 - 2.0) / n as f64
}

/// Trace-normalized distance of `DD*` by maximizing over every vertex
/// candidate of its unit-trace slice.
pub fn dd_star_trace_distance_exact(n: usize) -> Result<DistanceReport> {
    let candidates = enumerate_candidates(n)?;
    let reference = candidates.clone();
    let mut dists = Vec::with_capacity(candidates.len());
    for c in candidates {
        dists.push(psd_distance(&c.realize())?);
    }
    let stats = Stats::from_values(dists).expect("at least one candidate");
    Ok(DistanceReport {
        set: SetId::DdStar,
        normalization: Normalization::Trace,
        value: stats.max,
        witness: Some(reference.at(stats.argmax).realize()),
        method: Method::Enumeration,
        stats: Some(stats),
        theory: Some(dd_star_trace_theory(n)),
    })
}

/// Trace-normalized distance of `SDD*`, attained by `G(1/n, 1/n, n)`.
pub fn sdd_star_trace_distance_exact(n: usize) -> Result<DistanceReport> {
    let witness = sdd_trace_worst(n)?;
    Ok(DistanceReport {
        set: SetId::SddStar,
        normalization: Normalization::Trace,
        value: psd_distance(&witness)?,
        witness: Some(witness),
        method: Method::Witness,
        stats: None,
        theory: Some(two_by_two_theory(n)),
    })
}

/// Norm-normalized distance of `DD*` or `SDD*` (equal for `n ≥ 4`), attained
/// by the unit-norm matrix `G(1/n, 1/n, n)`.
pub fn norm_distance_exact(set: SetId, n: usize) -> Result<DistanceReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "the norm-normalized distance is only known for n >= 4, got {n}"
        )));
    }
    let witness = sdd_trace_worst(n)?;
    Ok(DistanceReport {
        set,
        normalization: Normalization::Frobenius,
        value: psd_distance(&witness)?,
        witness: Some(witness),
        method: Method::Witness,
        stats: None,
        theory: Some(two_by_two_theory(n)),
    })
}

/// Known closed-form supremum for a `(set, normalization, n)` triple.
pub fn theory_value(set: SetId, normalization: Normalization, n: usize) -> Option<f64> {
    match (set, normalization) {
        (SetId::DdStar, Normalization::Trace) if n >= 2 => Some(dd_star_trace_theory(n)),
        (SetId::SddStar, Normalization::Trace) if n >= 2 => Some(two_by_two_theory(n)),
        (_, Normalization::Frobenius) if n >= 4 => Some(two_by_two_theory(n)),
        _ => None,
    }
}

/// Largest distance over `cfg.count` samples of `cfg.set` under
/// `cfg.normalization`. `theory` is `None` where no closed form is known
/// (e.g. Frobenius normalization with `n = 3`).
pub fn sampled_distance(cfg: &SamplerConfig, n: usize) -> Result<DistanceReport> {
    let sampler = Sampler::new(cfg, n)?;
    let mut dists = Vec::with_capacity(cfg.count as usize);
    for x in sampler.stream(cfg.count) {
        dists.push(psd_distance(&x)?);
    }
    let stats = Stats::from_values(dists).expect("count >= 1");
    Ok(DistanceReport {
        set: cfg.set,
        normalization: cfg.normalization,
        value: stats.max,
        witness: None,
        method: Method::Sampling,
        stats: Some(stats),
        theory: theory_value(cfg.set, cfg.normalization, n),
    })
}

/// Bounds on the norm-normalized distance between the k-PSD closure and the
/// PSD cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnkBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn snk_bounds(n: usize, k: usize) -> Result<SnkBounds> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("need 2 <= k <= n, got n = {n}, k = {k}")));
    }
    let (n, k) = (n as f64, k as f64);
    Ok(SnkBounds {
        lower: (n - k) / ((k - 1.0).powi(2) * n + n * (n - 1.0)).sqrt(),
        upper: (n - k) / (n + k - 2.0),
    })
}

/// Outcome of checking a PSD certificate against a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    /// `dist(X, PSD)`.
    pub distance: f64,
    /// `‖X − (n − 1)·C‖_F` for the certificate matrix `C`.
    pub bound: f64,
    pub holds: bool,
}

fn certificate(x: &SymMat, cert: &SymMat, n: usize) -> Result<Certificate> {
    let distance = psd_distance(x)?;
    let bound = (x - &cert.scaled(n as f64 - 1.0)).fro_norm();
    let limit = two_by_two_theory(n) + THEOREM_TOL;
    Ok(Certificate {
        distance,
        bound,
        holds: distance <= bound + THEOREM_TOL && bound <= limit,
    })
}

/// Checks `dist(X) ≤ ‖X − (n−1)X̃‖_F ≤ (n−2)/n` for a unit-trace `X ∈ SDD*`.
pub fn verify_sdd_certificate(x: &SymMat) -> Result<Certificate> {
    let n = x.n();
    if n < 3 {
        return Err(Error::Precondition(format!("order must be >= 3, got {n}")));
    }
    if (x.trace() - 1.0).abs() > THEOREM_TOL {
        return Err(Error::Precondition(format!("trace must be 1, got {}", x.trace())));
    }
    if !sdd_star_contains(x, default_tol(x))?.verdict {
        return Err(Error::Precondition("matrix is not in SDD*".into()));
    }
    certificate(x, &sdd_tilde(x)?, n)
}

/// Checks `dist(X) ≤ ‖X − (n−1)X̄‖_F ≤ (n−2)/n` for a unit-norm `X ∈ DD*`.
pub fn verify_dd_certificate(x: &SymMat) -> Result<Certificate> {
    let n = x.n();
    if n < 4 {
        return Err(Error::Precondition(format!("order must be >= 4, got {n}")));
    }
    if (x.fro_norm() - 1.0).abs() > THEOREM_TOL {
        return Err(Error::Precondition(format!(
            "Frobenius norm must be 1, got {}",
            x.fro_norm()
        )));
    }
    if !dd_star_contains(x, default_tol(x))?.verdict {
        return Err(Error::Precondition("matrix is not in DD*".into()));
    }
    certificate(x, &dd_bar(x)?, n)
}
