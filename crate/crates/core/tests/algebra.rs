use proptest::prelude::*;
use rsr_core::algebra::{
    classify, evaluate_word, order_of, ConjugacyClass, GroupWord, Letter, UnimodularMatrix, C64,
};

fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    (
        (0.3f64..2.0, -3.1f64..3.1),
        (-2.0f64..2.0, -2.0f64..2.0),
        (-2.0f64..2.0, -2.0f64..2.0),
    )
        .prop_map(|((ra, ta), (br, bi), (cr, ci))| {
            let a = C64::from_polar(ra, ta);
            let (b, c) = (C64::new(br, bi), C64::new(cr, ci));
            let d = (C64::new(1.0, 0.0) + b * c) / a;
            UnimodularMatrix::new(a, b, c, d).unwrap()
        })
}

fn elliptic_of_order(n: u32) -> UnimodularMatrix {
    let t = std::f64::consts::PI / n as f64;
    let (s, c) = t.sin_cos();
    UnimodularMatrix::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)).unwrap()
}

fn word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0usize..3, prop::bool::ANY), 0..12).prop_map(|v| {
        GroupWord::from_letters(
            v.into_iter().map(|(g, p)| Letter::new(g, if p { 1 } else { -1 }).unwrap()).collect(),
        )
    })
}

proptest! {
    #[test]
    fn det_is_multiplicative(a in unimodular(), b in unimodular()) {
        let lhs = (a * b).det();
        let rhs = a.det() * b.det();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.mat().max_abs() * b.mat().max_abs()).powi(2));
    }

    #[test]
    fn trace_is_cyclic(a in unimodular(), b in unimodular()) {
        let scale = 1.0 + a.mat().max_abs() * b.mat().max_abs();
        prop_assert!(((a * b).trace() - (b * a).trace()).norm() <= 1e-12 * scale);
    }

    #[test]
    fn order_of_power_divides(n in 2u32..13, k in 1i64..30, g in unimodular()) {
        // Conjugate a rotation of order 2n by a random unimodular matrix.
        let a = g * elliptic_of_order(n) * g.inverse();
        let tol = 1e-9 * (1.0 + g.mat().max_abs()).powi(4);
        let full = order_of(&a, 64, tol).unwrap();
        let sub = order_of(&a.pow(k), 64, tol).unwrap();
        prop_assert_eq!(full, 2 * n);
        prop_assert_eq!(full % sub, 0);
    }

    #[test]
    fn inverse_word_evaluates_to_inverse(w in word(), a in unimodular(), b in unimodular(), c in unimodular()) {
        let alpha = [a, b, c];
        let m = evaluate_word(&w, &alpha).unwrap();
        let mi = evaluate_word(&w.inverse(), &alpha).unwrap();
        let scale = (1.0 + m.mat().max_abs()).powi(2);
        prop_assert!((m * mi).dist(&UnimodularMatrix::identity()) <= 1e-9 * scale);
        let r = evaluate_word(&w.reduced(), &alpha).unwrap();
        prop_assert!(r.dist(&m) <= 1e-9 * scale);
    }
}

#[test]
fn words_evaluate_right_to_left() {
    let a = UnimodularMatrix::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
    let b = UnimodularMatrix::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
    // γ₂γ₁ ↦ ρ(γ₂)ρ(γ₁)
    let w = GroupWord::from_powers(&[(1, 1), (0, 1)]);
    let v = evaluate_word(&w, &[a, b]).unwrap();
    assert!(v.dist(&(b * a)) < 1e-15);
    assert!(v.dist(&(a * b)) > 0.5);
}

#[test]
fn classes() {
    assert_eq!(classify(&elliptic_of_order(5), 1e-9), ConjugacyClass::Elliptic);
    assert_eq!(classify(&-UnimodularMatrix::identity(), 1e-9), ConjugacyClass::Central);
    let p = UnimodularMatrix::new(C64::new(1.0, 0.0), C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
    assert_eq!(classify(&p, 1e-9), ConjugacyClass::Parabolic);
    assert_eq!(order_of(&p, 100, 1e-9), None);
}
