//! The dodecahedral RSR representation built from the (5,3,4) Coxeter lattice.

use serde::Serialize;

use crate::algebra::{evaluate_word, order_of, GroupWord, Mat2, UnimodularMatrix, C64};
use crate::charvar::{
    abelianize, eta_locus_residual, fricke_sphere_residual, fricke_torus_residual, genus_of_order,
    lift_traces, SphereTraceCoords, TraceCoords, Weight,
};
use crate::lorentz::{lift_check, Tetrahedron};

/// Generators g_{m,n} lifting R_m R_n, then j₀ = g_{1,2} g_{1,3} and the
/// four matrices J₁ = −g_{0,2}², J_{k+1} = j₀ J_k j₀⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DodecaData {
    pub g01: UnimodularMatrix,
    pub g02: UnimodularMatrix,
    pub g03: UnimodularMatrix,
    pub g12: UnimodularMatrix,
    pub g13: UnimodularMatrix,
    pub g23: UnimodularMatrix,
    pub j0: UnimodularMatrix,
    pub j: [UnimodularMatrix; 4],
}

fn um(a: C64, b: C64, c: C64, d: C64) -> UnimodularMatrix {
    UnimodularMatrix::new(a, b, c, d).expect("generator radicals are unimodular")
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn build_dodeca() -> DodecaData {
    let s5 = 5f64.sqrt();
    let s2 = 2f64.sqrt();
    let i = C64::i();
    let zero = C64::new(0.0, 0.0);

    let a = 1.0 + s5 + (2.0 * (s5 - 1.0)).sqrt();
    let g01 = um(zero, -(C64::new(1.0, 1.0)) * (a / 4.0), C64::new(2.0, -2.0) / a, zero);

    let b = (1.0 + s5 - (2.0 * (1.0 + s5)).sqrt()).sqrt();
    let g02 = um(re(-b / 2.0), re(-1.0 / b), re(b / 2.0), re(-1.0 / b));

    let c = (0.5 * (1.0 + s5 + (2.0 * (1.0 + s5)).sqrt())).sqrt();
    let g03 = um(zero, -i * c, -i / c, zero);

    let g12 = um(
        C64::new(-0.5, 0.5),
        C64::new(0.5, 0.5),
        C64::new(-0.5, 0.5),
        C64::new(-0.5, -0.5),
    );
    let g13 = um(C64::new(-1.0, -1.0) / s2, zero, zero, C64::new(-1.0, 1.0) / s2);
    let k = -i / s2;
    let g23 = um(k, k, k, -k);

    let j0 = g12 * g13;
    let j1 = -(g02 * g02);
    let mut j = [j1; 4];
    for n in 1..4 {
        j[n] = j0 * j[n - 1] * j0.inverse();
    }
    DodecaData { g01, g02, g03, g12, g13, g23, j0, j }
}

impl DodecaData {
    /// Alphabet for words: g01, g02, g03, g12, g13, g23, −Id.
    pub fn alphabet(&self) -> [UnimodularMatrix; 7] {
        [self.g01, self.g02, self.g03, self.g12, self.g13, self.g23, -UnimodularMatrix::identity()]
    }

    /// (m, n, g_{m,n}) for the six generators.
    pub fn generators(&self) -> [(usize, usize, UnimodularMatrix); 6] {
        [
            (0, 1, self.g01),
            (0, 2, self.g02),
            (0, 3, self.g03),
            (1, 2, self.g12),
            (1, 3, self.g13),
            (2, 3, self.g23),
        ]
    }

    /// J_k as a word in the alphabet of [`DodecaData::alphabet`]:
    /// (g12 g13)^{k−1} · (−Id) · g02² · (g12 g13)^{−(k−1)}.
    pub fn j_word(k: usize) -> GroupWord {
        let j0 = GroupWord::from_powers(&[(3, 1), (4, 1)]);
        let mut conj = GroupWord::empty();
        for _ in 1..k {
            conj = conj.concat(&j0);
        }
        let core = GroupWord::from_powers(&[(6, 1), (1, 2)]);
        conj.concat(&core).concat(&conj.inverse())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsrReport {
    pub is_real: bool,
    pub traces: [C64; 4],
    pub xt: C64,
    pub yt: C64,
    pub zt: C64,
    pub is_symmetric: bool,
    pub is_rectangular: bool,
    pub order_k: Option<u32>,
    pub genus: Option<i64>,
    pub product_is_identity: bool,
}

/// Real, Symmetric and Rectangular flags for (M₁..M₄) at weight r̃.
pub fn rsr_check(m: &[UnimodularMatrix; 4], w: &Weight, tol: f64) -> RsrReport {
    let xt = (m[0] * m[1]).trace();
    let yt = (m[1] * m[2]).trace();
    let zt = (m[0] * m[2]).trace();
    let z24 = (m[1] * m[3]).trace();
    let traces = [m[0].trace(), m[1].trace(), m[2].trace(), m[3].trace()];
    let entries_real = m.iter().all(|a| a.mat().max_imag() <= tol);
    let below = |v: C64| v.im.abs() <= tol && v.re < -2.0;
    let is_real = entries_real && below(xt) && below(yt) && below(zt);
    let mu = w.mu();
    let is_symmetric = traces.iter().all(|t| (*t - mu).norm() <= tol);
    let is_rectangular = (zt - z24).norm() <= tol;
    let order_k = order_of(&m[0], 1000, tol).filter(|&n| m.iter().all(|a| order_of(a, n, tol) == Some(n)));
    let genus = order_k.map(|k| genus_of_order(k as i64));
    let product = m[3] * m[2] * m[1] * m[0];
    RsrReport {
        is_real,
        traces,
        xt,
        yt,
        zt,
        is_symmetric,
        is_rectangular,
        order_k,
        genus,
        product_is_identity: product.dist(&UnimodularMatrix::identity()) <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub residual: f64,
    pub passed: bool,
}

impl Check {
    fn value(name: impl Into<String>, expected: f64, actual: C64, tol: f64) -> Self {
        let residual = (actual - expected).norm();
        Self { name: name.into(), expected, actual: actual.re, residual, passed: residual <= tol }
    }

    fn zero(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self { name: name.into(), expected: 0.0, actual: residual, residual, passed: residual <= tol }
    }

    fn order(name: impl Into<String>, a: &UnimodularMatrix, expected: u32, tol: f64) -> Self {
        let found = order_of(a, 4 * expected, tol);
        let residual = a.pow(expected as i64).dist(&UnimodularMatrix::identity());
        Self {
            name: name.into(),
            expected: expected as f64,
            actual: found.map_or(f64::NAN, |n| n as f64),
            residual,
            passed: found == Some(expected),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DodecaReport {
    pub checks: Vec<Check>,
    pub rsr: RsrReport,
    pub torus_lift: Option<TraceCoords>,
    pub passed: bool,
}

/// Every trace identity, order and word claim for (J₁..J₄), plus the lift
/// of its sphere traces to the torus at r = 1/10.
pub fn verify_dodeca(tol: f64) -> DodecaReport {
    let d = build_dodeca();
    let s5 = 5f64.sqrt();
    let w = Weight::sphere(3, 10).expect("3/10 is admissible");
    let j = d.j;
    let mut checks = Vec::new();

    for (k, jk) in j.iter().enumerate() {
        checks.push(Check::value(format!("tr J{}", k + 1), (1.0 - s5) / 2.0, jk.trace(), tol));
    }
    for (k, jk) in j.iter().enumerate() {
        checks.push(Check::value(format!("tr J{} = mu", k + 1), w.mu(), jk.trace(), tol));
    }
    let t21 = -1.0 - s5;
    let t31 = -1.5 * (1.0 + s5);
    checks.push(Check::value("tr J2J1", t21, (j[1] * j[0]).trace(), tol));
    checks.push(Check::value("tr J3J2", t21, (j[2] * j[1]).trace(), tol));
    checks.push(Check::value("tr J3J1", t31, (j[2] * j[0]).trace(), tol));
    checks.push(Check::value("tr J4J2", t31, (j[3] * j[1]).trace(), tol));

    let word = GroupWord::from_powers(&[(3, 1), (2, 1), (1, 1), (0, 1)]);
    let prod = evaluate_word(&word, &j).expect("indices in range");
    checks.push(Check::zero("J4J3J2J1 = Id", prod.dist(&UnimodularMatrix::identity()), tol));

    checks.push(Check::order("order j0", &d.j0, 8, tol));
    for (k, jk) in j.iter().enumerate() {
        checks.push(Check::order(format!("order J{}", k + 1), jk, 10, tol));
    }
    checks.push(Check::order("order g02", &d.g02, 5, tol));

    let s2 = 2f64.sqrt();
    let j0_closed = Mat2::real(1.0 / s2, -1.0 / s2, 1.0 / s2, 1.0 / s2);
    checks.push(Check::zero("j0 closed form", d.j0.mat().dist(&j0_closed), tol));

    let alphabet = d.alphabet();
    for (k, jk) in j.iter().enumerate() {
        let from_word = evaluate_word(&DodecaData::j_word(k + 1), &alphabet).expect("indices in range");
        checks.push(Check::zero(format!("J{} as word", k + 1), from_word.dist(jk), tol));
    }
    let real_defect = j.iter().chain(std::iter::once(&d.j0)).map(|a| a.mat().max_imag()).fold(0.0, f64::max);
    checks.push(Check::zero("J entries real", real_defect, tol));
    let j04 = d.j0.pow(4);
    checks.push(Check::zero("j0^4 J1 = J1 j0^4", (j04 * j[0]).dist(&(j[0] * j04)), tol));

    let tet = Tetrahedron::canonical();
    for (m, n, g) in d.generators() {
        let res = lift_check(&g, &tet.reflection_pair(m, n), tol).unwrap_or(f64::INFINITY);
        checks.push(Check::zero(format!("g{m}{n} lifts R{m}R{n}"), res, 1e-8));
    }

    let sphere = SphereTraceCoords::of_quadruple(&j, w.mu());
    checks.push(Check::zero("sphere Fricke residual", fricke_sphere_residual(&sphere).norm(), 1e-8));
    let torus_lift = lift_traces(&sphere, &w, 1e-8)
        .ok()
        .and_then(|ls| ls.into_iter().find(|t| t.x.re > 0.0 && t.y.re > 0.0 && t.z.re > 0.0));
    match torus_lift {
        Some(t) => {
            checks.push(Check::zero("torus lift residual", fricke_torus_residual(&t, &w).norm(), 1e-8));
            checks.push(Check::zero("torus lift eta residual", eta_locus_residual(t.x.re, t.y.re, &w).abs(), 1e-8));
            let back = abelianize(&t, &w);
            let rt = (back.xt - sphere.xt).norm().max((back.yt - sphere.yt).norm()).max((back.zt - sphere.zt).norm());
            checks.push(Check::zero("torus lift round trip", rt, 1e-8));
        }
        None => checks.push(Check::zero("torus lift exists", f64::INFINITY, 1e-8)),
    }

    let rsr = rsr_check(&j, &w, tol);
    let flag = |name: &str, ok: bool| Check {
        name: name.into(),
        expected: 1.0,
        actual: if ok { 1.0 } else { 0.0 },
        residual: if ok { 0.0 } else { 1.0 },
        passed: ok,
    };
    checks.push(flag("RSR real", rsr.is_real));
    checks.push(flag("RSR symmetric", rsr.is_symmetric));
    checks.push(flag("RSR rectangular", rsr.is_rectangular));
    checks.push(flag("genus 4", rsr.genus == Some(4) && rsr.order_k == Some(10)));

    let passed = checks.iter().all(|c| c.passed);
    DodecaReport { checks, rsr, torus_lift, passed }
}
