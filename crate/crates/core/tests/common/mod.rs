#![allow(dead_code)]

use psdcone::SymMat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymMat {
    SymMat::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// `BᵀB` with standard-normal `B`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> SymMat {
    let b: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    SymMat::from_fn(n, |i, j| (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum())
}

/// Random diagonally dominant matrix: diagonal = row abs sum + exponential slack.
pub fn random_dd(rng: &mut ChaCha8Rng, n: usize) -> SymMat {
    let mut off = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.sample(StandardNormal);
            off[i * n + j] = v;
            off[j * n + i] = v;
        }
    }
    let diag: Vec<f64> = (0..n)
        .map(|i| off[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>() + rng.gen::<f64>())
        .collect();
    SymMat::from_fn(n, |i, j| if i == j { diag[i] } else { off[i * n + j] })
}

/// Explicit pair sum `(1/C(n,2)) ∑_{i<j} X^{(i,j)}` for the SDD* certificate.
pub fn sdd_tilde_by_summation(x: &SymMat) -> SymMat {
    let n = x.n();
    let mut acc = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            acc[i * n + i] += x.get(i, i);
            acc[j * n + j] += x.get(j, j);
            acc[i * n + j] += x.get(i, j);
            acc[j * n + i] += x.get(i, j);
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    SymMat::from_fn(n, |i, j| acc[i * n + j] / pairs)
}

/// Explicit pair sum for the DD* certificate: each 2×2 block carries the
/// averaged diagonal `(X_ii + X_jj)/2` on both diagonal positions.
pub fn dd_bar_by_summation(x: &SymMat) -> SymMat {
    let n = x.n();
    let mut acc = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let m = (x.get(i, i) + x.get(j, j)) / 2.0;
            acc[i * n + i] += m;
            acc[j * n + j] += m;
            acc[i * n + j] += x.get(i, j);
            acc[j * n + i] += x.get(i, j);
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    SymMat::from_fn(n, |i, j| acc[i * n + j] / pairs)
}
