//! Membership tests for the PSD cone and its outer approximations.
//!
//! Every test returns a [`MembershipReport`] listing each violated
//! constraint together with its raw residual. Indices in reports are 1-based.
//!
//! A constraint is violated when its residual falls below `-tol`, with one
//! exception: the product constraint of the scaled-diagonally-dominant dual
//! is checked on `X + tol·I`, i.e. `(X_ii + tol)(X_jj + tol) ≥ X_ij²`. That
//! keeps the test homogeneous under `X → tX, tol → t·tol` and makes its
//! verdict coincide with the 2×2 principal-submatrix test `λ_min ≥ -tol`.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{eig, SymMat};

/// Relative tolerance factor for [`default_tol`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Largest number of principal submatrices [`k_psd_contains`] will examine.
pub const K_PSD_ENUMERATION_CAP: u128 = 200_000;

/// `1e-9 · max(1, ‖X‖_F)`.
pub fn default_tol(x: &SymMat) -> f64 {
    DEFAULT_REL_TOL * x.fro_norm().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cone {
    Psd,
    DdStar,
    SddStar,
    KPsd(usize),
    /// Diagonally dominant matrices (the primal cone of `DdStar`).
    Dd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    /// `λ_min(X) ≥ 0`.
    MinEigenvalue,
    /// `X_ii ≥ 0`.
    Diagonal { i: usize },
    /// `X_ii + X_jj ± 2 X_ij ≥ 0`.
    DdPair { i: usize, j: usize, sign: PairSign },
    /// `X_ii X_jj − X_ij² ≥ 0`.
    SddProduct { i: usize, j: usize },
    /// `λ_min` of the principal submatrix on `indices` is nonnegative.
    Submatrix { indices: Vec<usize> },
    /// `X_ii − ∑_{j≠i} |X_ij| ≥ 0`.
    RowDominance { i: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub cone: Cone,
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

impl MembershipReport {
    fn new(cone: Cone, violations: Vec<Violation>) -> Self {
        Self {
            cone,
            verdict: violations.is_empty(),
            violations,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    Ok(())
}

pub fn psd_contains(x: &SymMat, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let lmin = eig(x)?.min_eigenvalue();
    let mut violations = Vec::new();
    if lmin < -tol {
        violations.push(Violation {
            constraint: Constraint::MinEigenvalue,
            residual: lmin,
        });
    }
    Ok(MembershipReport::new(Cone::Psd, violations))
}

/// Dual of the diagonally dominant cone: `X_ii + X_jj ± 2X_ij ≥ 0` for all
/// `i ≤ j`. For `i = j` this reduces to `X_ii ≥ 0`, reported as a
/// [`Constraint::Diagonal`].
pub fn dd_star_contains(x: &SymMat, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let n = x.n();
    let mut violations = Vec::new();
    for i in 0..n {
        let d = x.get(i, i);
        if d < -tol {
            violations.push(Violation {
                constraint: Constraint::Diagonal { i: i + 1 },
                residual: d,
            });
        }
        for j in i + 1..n {
            let s = x.get(i, i) + x.get(j, j);
            let off = 2.0 * x.get(i, j);
            for (sign, r) in [(PairSign::Plus, s + off), (PairSign::Minus, s - off)] {
                if r < -tol {
                    violations.push(Violation {
                        constraint: Constraint::DdPair { i: i + 1, j: j + 1, sign },
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(MembershipReport::new(Cone::DdStar, violations))
}

/// Dual of the scaled diagonally dominant cone (equivalently, every 2×2
/// principal submatrix is PSD).
pub fn sdd_star_contains(x: &SymMat, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let n = x.n();
    let mut violations = Vec::new();
    for i in 0..n {
        let d = x.get(i, i);
        if d < -tol {
            violations.push(Violation {
                constraint: Constraint::Diagonal { i: i + 1 },
                residual: d,
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b, c) = (x.get(i, i), x.get(j, j), x.get(i, j));
            let shifted = (a + tol) * (b + tol) - c * c;
            if shifted < 0.0 {
                violations.push(Violation {
                    constraint: Constraint::SddProduct { i: i + 1, j: j + 1 },
                    residual: a * b - c * c,
                });
            }
        }
    }
    Ok(MembershipReport::new(Cone::SddStar, violations))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// k-PSD closure: every `k × k` principal submatrix has `λ_min ≥ -tol`.
///
/// Refuses when `C(n, k)` exceeds [`K_PSD_ENUMERATION_CAP`].
pub fn k_psd_contains(x: &SymMat, k: usize, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let n = x.n();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("k must satisfy 2 <= k <= n = {n}, got {k}")));
    }
    let count = binomial(n, k);
    if count > K_PSD_ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: K_PSD_ENUMERATION_CAP,
        });
    }
    let mut violations = Vec::new();
    for idx in (0..n).combinations(k) {
        let lmin = eig(&x.principal_submatrix(&idx))?.min_eigenvalue();
        if lmin < -tol {
            violations.push(Violation {
                constraint: Constraint::Submatrix {
                    indices: idx.iter().map(|i| i + 1).collect(),
                },
                residual: lmin,
            });
        }
    }
    Ok(MembershipReport::new(Cone::KPsd(k), violations))
}

/// Diagonally dominant: `X_ii ≥ ∑_{j≠i} |X_ij| − tol` for every row.
pub fn dd_primal_contains(x: &SymMat, tol: f64) -> Result<MembershipReport> {
    check_tol(tol)?;
    let n = x.n();
    let violations = (0..n)
        .filter_map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| x.get(i, j).abs()).sum();
            let r = x.get(i, i) - off;
            (r < -tol).then_some(Violation {
                constraint: Constraint::RowDominance { i: i + 1 },
                residual: r,
            })
        })
        .collect();
    Ok(MembershipReport::new(Cone::Dd, violations))
}

/// `⟨X, Y⟩`; nonnegative whenever `X ∈ DD*` and `Y ∈ DD`.
pub fn duality_pairing(x: &SymMat, y: &SymMat) -> Result<f64> {
    x.inner(y)
}

/// Dispatches to the membership test for `cone`.
pub fn contains(cone: Cone, x: &SymMat, tol: f64) -> Result<MembershipReport> {
    match cone {
        Cone::Psd => psd_contains(x, tol),
        Cone::DdStar => dd_star_contains(x, tol),
        Cone::SddStar => sdd_star_contains(x, tol),
        Cone::KPsd(k) => k_psd_contains(x, k, tol),
        Cone::Dd => dd_primal_contains(x, tol),
    }
}
