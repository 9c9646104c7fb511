use std::f64::consts::PI;

use proptest::prelude::*;
use rsr_core::algebra::C64;
use rsr_core::charvar::Weight;
use rsr_core::covering::{
    covering_triviality_check, fuchsian_local_monodromies, higgs_det, kernel_generators_for, PuncturePoints,
    SignChoice,
};

fn admissible() -> Vec<Weight> {
    let mut out = Vec::new();
    for k in 2..=12 {
        for l in 1..k {
            if let Ok(w) = Weight::sphere(l, k) {
                if w.numerator() == l && w.order() == k {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn sign_choices() -> Vec<SignChoice> {
    [(1, -1, -1), (-1, 1, -1), (-1, -1, 1)].iter().map(|&(a, b, c)| SignChoice::new(a, b, c).unwrap()).collect()
}

#[test]
fn triviality_for_all_small_denominators() {
    let ws = admissible();
    assert!(ws.iter().any(|w| w.order() == 12));
    for w in &ws {
        let rep = covering_triviality_check(w, SignChoice::default(), 1e-9);
        assert!(rep.passed, "{w}: {rep:?}");
        if w.order() % 2 == 1 {
            assert!(rep.all_plus, "{w}");
        }
    }
}

#[test]
fn local_monodromies_commute() {
    for w in admissible() {
        for s in sign_choices() {
            let m = fuchsian_local_monodromies(&w, s);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!((m[i] * m[j]).mat(), (m[j] * m[i]).mat());
                }
            }
        }
    }
}

#[test]
fn kernel_words_vanish_in_cyclic_group() {
    for n in 2..=13 {
        for s in sign_choices() {
            let sig = s.sigma();
            let weights = [sig[0] as i64, sig[1] as i64, sig[2] as i64];
            let gens = kernel_generators_for(n, s).unwrap();
            assert_eq!(gens.len() as i64, 2 * n + 1);
            for g in gens {
                assert_eq!(g.weighted_exponent_sum(&weights).rem_euclid(n), 0, "{g}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn higgs_residues_by_quadrature(phi in 0.2f64..1.3, which in 0usize..3, j in 0usize..4) {
        // det Φ has simple poles; the residue at p_j is read off from the
        // partial-fraction form and compared with a trapezoid contour integral.
        let s = sign_choices()[which];
        let pts = PuncturePoints::new(phi).unwrap();
        let p = pts.points();
        let min_gap = (0..4).filter(|&k| k != j).map(|k| (p[k] - p[j]).norm()).fold(f64::INFINITY, f64::min);
        let rad = 0.25 * min_gap;
        let n = 400;
        let mut integral = C64::new(0.0, 0.0);
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            let e = C64::from_polar(1.0, t);
            let z = p[j] + e * rad;
            integral += higgs_det(z, &pts, s).unwrap() * e * C64::new(0.0, rad) * (2.0 * PI / n as f64);
        }
        let residue = integral / C64::new(0.0, 2.0 * PI);
        let ([a, b], [c, d]) = s.pairing();
        let f = |z: C64, u: usize, v: usize| (z - p[u]).inv() - (z - p[v]).inv();
        let sign = if j == a || j == c { 1.0 } else { -1.0 };
        let other = if j == a || j == b { f(p[j], c, d) } else { f(p[j], a, b) };
        let expect = -other * sign;
        prop_assert!((residue - expect).norm() <= 1e-9 * (1.0 + expect.norm()), "{residue} vs {expect}");
    }
}
