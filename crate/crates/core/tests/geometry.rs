use proptest::prelude::*;
use rsr_core::algebra::{UnimodularMatrix, C64};
use rsr_core::charvar::Weight;
use rsr_core::dodeca::{build_dodeca, rsr_check};
use rsr_core::lorentz::{act_vec, dihedral_data, lift_check, lorentz_inner, reflect, LorentzVec, Tetrahedron};

fn vec4() -> impl Strategy<Value = LorentzVec> {
    [-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0].prop_map(LorentzVec::from_array)
}

fn spacelike_unit() -> impl Strategy<Value = LorentzVec> {
    (vec4(), -2.0f64..2.0).prop_filter_map("spacelike", |(v, t)| {
        let s = LorentzVec::from_array([t, v.x1, v.x2, v.x3]);
        let n = lorentz_inner(&s, &s);
        (n > 0.1).then(|| (1.0 / n.sqrt()) * s)
    })
}

proptest! {
    #[test]
    fn reflection_is_an_isometric_involution(u in vec4(), v in vec4(), l in spacelike_unit()) {
        let (ru, rv) = (reflect(&u, &l, 1e-12).unwrap(), reflect(&v, &l, 1e-12).unwrap());
        let s = 1.0 + lorentz_inner(&u, &u).abs() + lorentz_inner(&v, &v).abs();
        prop_assert!((lorentz_inner(&ru, &rv) - lorentz_inner(&u, &v)).abs() <= 1e-12 * s * 10.0);
        prop_assert!(reflect(&ru, &l, 1e-12).unwrap().max_abs_diff(&u) <= 1e-12 * s);
    }

    #[test]
    fn generator_words_preserve_hyperboloid(word in prop::collection::vec(0usize..6, 1..8),
                                           p in [-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5]) {
        let d = build_dodeca();
        let gens = d.generators();
        let g = word.iter().fold(UnimodularMatrix::identity(), |acc, &k| acc * gens[k].2);
        let x0 = (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let v = LorentzVec::from_array([x0, p[0], p[1], p[2]]);
        let w = act_vec(&v, &g);
        prop_assert!(w.on_hyperboloid(1e-9 * (1.0 + w.x0 * w.x0)));
    }

    #[test]
    fn rsr_flags_are_conjugation_invariant(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.3f64..2.0) {
        let d = build_dodeca();
        let g = UnimodularMatrix::new(C64::new(c, 0.0), C64::new(a, 0.0), C64::new(b, 0.0),
                                      C64::new((1.0 + a * b) / c, 0.0)).unwrap();
        let gi = g.inverse();
        let w = Weight::sphere(3, 10).unwrap();
        let tol = 1e-9 * (1.0 + g.mat().max_abs()).powi(4);
        let base = rsr_check(&d.j, &w, tol);
        let conj = d.j.map(|m| g * m * gi);
        let moved = rsr_check(&conj, &w, tol);
        prop_assert_eq!(base.is_symmetric, moved.is_symmetric);
        prop_assert_eq!(base.is_rectangular, moved.is_rectangular);
        prop_assert_eq!(base.order_k, moved.order_k);
        prop_assert_eq!(base.is_real, moved.is_real);
        prop_assert!((base.xt - moved.xt).norm() <= tol);
    }
}

#[test]
fn tetrahedron_data() {
    let t = Tetrahedron::canonical();
    t.validate(1e-9).unwrap();
    let mut expect = [0.0, 0.0, 0.0, (std::f64::consts::PI / 5.0).cos(), 0.5, 0.5f64.sqrt()];
    expect.sort_by(f64::total_cmp);
    let got = dihedral_data(&t);
    for (g, e) in got.iter().zip(expect) {
        assert!((g - e).abs() <= 1e-9, "{got:?}");
    }
    let d = build_dodeca();
    for (m, n, g) in d.generators() {
        assert!(lift_check(&g, &t.reflection_pair(m, n), 1e-8).unwrap() <= 1e-8, "g{m}{n}");
    }
}

#[test]
fn j0_fourth_power_commutes() {
    let d = build_dodeca();
    let j4 = d.j0.pow(4);
    assert!((j4 * d.j[0]).dist(&(d.j[0] * j4)) <= 1e-9);
    for k in 1..4 {
        let expect = d.j0.pow(k as i64) * d.j[0] * d.j0.pow(-(k as i64));
        assert!(expect.dist(&d.j[k]) <= 1e-9);
    }
}
