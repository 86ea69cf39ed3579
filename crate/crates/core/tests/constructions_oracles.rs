mod common;

use rand::Rng;

use psdcone::analysis::dd_star_trace_theory;
use psdcone::cones::dd_star_contains;
use psdcone::constructions::{
    dd_bar, enumerate_candidates, g_spectrum, make_g, make_star, sdd_tilde, ExtremeCandidate,
    SignPattern,
};
use psdcone::matcore::{eig, psd_distance};

#[test]
fn g_spectrum_matches_eigensolver() {
    let mut rng = common::rng(1);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=10);
        let a = rng.gen_range(-3.0..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let spectrum = g_spectrum(a, b, n).unwrap();
        let expanded: Vec<f64> = spectrum
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect();
        let computed = eig(&make_g(a, b, n).unwrap()).unwrap().eigenvalues;
        assert_eq!(expanded.len(), n);
        for (e, c) in expanded.iter().zip(&computed) {
            assert!((e - c).abs() <= 1e-10, "a = {a}, b = {b}, n = {n}");
        }
    }
}

#[test]
fn certificates_match_pair_sums() {
    let mut rng = common::rng(2);
    for _ in 0..100 {
        let n = rng.gen_range(3..=10);
        let x = common::random_symmetric(&mut rng, n);
        let tilde = sdd_tilde(&x).unwrap();
        let bar = dd_bar(&x).unwrap();
        assert!(tilde.max_abs_diff(&common::sdd_tilde_by_summation(&x)) <= 1e-12);
        assert!(bar.max_abs_diff(&common::dd_bar_by_summation(&x)) <= 1e-12);
    }
}

#[test]
fn every_candidate_is_a_unit_trace_dd_star_point_at_the_maximum() {
    for n in 2..=10 {
        let expected = dd_star_trace_theory(n);
        for c in enumerate_candidates(n).unwrap() {
            let x = c.realize();
            assert!(dd_star_contains(&x, 0.0).unwrap().verdict);
            assert_eq!(x.trace(), 1.0);
            let d = psd_distance(&x).unwrap();
            assert!((d - expected).abs() <= 1e-9, "{n} {d}");
        }
    }
}

#[test]
fn star_is_last_row_candidate() {
    for n in 2..=8 {
        for bits in 0..1u64 << (n - 1) {
            let signs = SignPattern::from_bits(bits, n - 1);
            let star = make_star(n, &signs).unwrap();
            let cand = ExtremeCandidate::new(n, n, signs).unwrap().realize();
            assert_eq!(star, cand);
        }
    }
}
