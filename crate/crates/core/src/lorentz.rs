//! Hyperboloid model of H³ in R^{3,1}, Lorentz reflections, and the
//! SL(2,C) action on Hermitian matrices.

use std::ops::{Add, Mul, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Mat2, UnimodularMatrix, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LorentzError {
    #[error("normal is not unit spacelike (<L,L> = {0})")]
    NotUnitNormal(f64),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("invalid tetrahedron: {0}")]
    InvalidTetrahedron(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzVec {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LorentzVec {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Self::from_array(v)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (*self - *o).to_array().iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn on_hyperboloid(&self, tol: f64) -> bool {
        (lorentz_inner(self, self) + 1.0).abs() <= tol && self.x0 > 0.0
    }

    pub fn is_unit_spacelike(&self, tol: f64) -> bool {
        (lorentz_inner(self, self) - 1.0).abs() <= tol
    }
}

impl Add for LorentzVec {
    type Output = LorentzVec;
    fn add(self, o: LorentzVec) -> LorentzVec {
        LorentzVec::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for LorentzVec {
    type Output = LorentzVec;
    fn sub(self, o: LorentzVec) -> LorentzVec {
        LorentzVec::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<LorentzVec> for f64 {
    type Output = LorentzVec;
    fn mul(self, v: LorentzVec) -> LorentzVec {
        LorentzVec::new(self * v.x0, self * v.x1, self * v.x2, self * v.x3)
    }
}

/// −u₀v₀ + u₁v₁ + u₂v₂ + u₃v₃.
pub fn lorentz_inner(u: &LorentzVec, v: &LorentzVec) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
}

/// R_L(v) = v − 2⟨v,L⟩L.
pub fn reflect(v: &LorentzVec, l: &LorentzVec, tol: f64) -> Result<LorentzVec, LorentzError> {
    let n = lorentz_inner(l, l);
    if (n - 1.0).abs() > tol {
        return Err(LorentzError::NotUnitNormal(n));
    }
    Ok(*v - (2.0 * lorentz_inner(v, l)) * *l)
}

/// h = [[x0+x1, x2+i x3], [x2−i x3, x0−x1]]; det h = −⟨v,v⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian(Mat2);

impl Hermitian {
    pub fn from_vec(v: &LorentzVec) -> Self {
        Self(Mat2::new(
            C64::new(v.x0 + v.x1, 0.0),
            C64::new(v.x2, v.x3),
            C64::new(v.x2, -v.x3),
            C64::new(v.x0 - v.x1, 0.0),
        ))
    }

    pub fn try_new(m: Mat2, tol: f64) -> Result<Self, LorentzError> {
        let defect = m.dist(&m.conj_transpose());
        if !(defect <= tol) {
            return Err(LorentzError::NotHermitian(defect));
        }
        Ok(Self(m))
    }

    pub fn to_vec(&self) -> LorentzVec {
        let m = self.0;
        LorentzVec::new(
            0.5 * (m.a.re + m.d.re),
            0.5 * (m.a.re - m.d.re),
            0.5 * (m.b.re + m.c.re),
            0.5 * (m.b.im - m.c.im),
        )
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.det().re
    }
}

/// h·g = ḡᵀ h g.
pub fn act(h: &Hermitian, g: &UnimodularMatrix) -> Hermitian {
    let g = *g.mat();
    Hermitian(g.conj_transpose() * h.0 * g)
}

pub fn act_vec(v: &LorentzVec, g: &UnimodularMatrix) -> LorentzVec {
    act(&Hermitian::from_vec(v), g).to_vec()
}

/// A composition of reflections R_{L₀} ∘ R_{L₁} ∘ …; the last normal acts first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReflectionWord(pub Vec<LorentzVec>);

impl ReflectionWord {
    pub fn apply(&self, v: &LorentzVec, tol: f64) -> Result<LorentzVec, LorentzError> {
        let mut out = *v;
        for l in self.0.iter().rev() {
            out = reflect(&out, l, tol)?;
        }
        Ok(out)
    }
}

/// max over the standard basis of ‖act(e, g) − R(e)‖∞.
pub fn lift_check(g: &UnimodularMatrix, r: &ReflectionWord, tol: f64) -> Result<f64, LorentzError> {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let e = LorentzVec::basis(i);
        let lhs = act_vec(&e, g);
        let rhs = r.apply(&e, tol)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Vertices P₀..P₃ and face normals L₀..L₃; face Tⱼ is opposite Pⱼ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tetrahedron {
    pub vertices: [LorentzVec; 4],
    pub normals: [LorentzVec; 4],
}

impl Tetrahedron {
    /// The (5,3,4) fundamental tetrahedron.
    pub fn canonical() -> Self {
        let s5 = 5f64.sqrt();
        let s2 = 2f64.sqrt();
        let q = 5f64.powf(-0.25);
        let h = (1.0 + s5).sqrt() / 2.0;
        let vertices = [
            LorentzVec::new(1.0, 0.0, 0.0, 0.0),
            LorentzVec::new((1.0 + 2.0 / s5).sqrt(), -q, -q, 0.0),
            LorentzVec::new((3.0 + s5).sqrt() / 2.0, -(s5 - 1.0).sqrt() / 2.0, 0.0, 0.0),
            LorentzVec::new((7.0 + 3.0 * s5).sqrt() / 2.0, -h, -h, h),
        ];
        let normals = [
            LorentzVec::new(1.0 / (1.0 + s5).sqrt(), -(3.0 + s5).sqrt() / 2.0, 0.0, 0.0),
            LorentzVec::new(0.0, 0.0, 1.0 / s2, 1.0 / s2),
            LorentzVec::new(0.0, -1.0 / s2, 1.0 / s2, 0.0),
            LorentzVec::new(0.0, 0.0, 0.0, 1.0),
        ];
        Self { vertices, normals }
    }

    pub fn validate(&self, tol: f64) -> Result<(), LorentzError> {
        for (i, p) in self.vertices.iter().enumerate() {
            if !p.on_hyperboloid(tol) {
                return Err(LorentzError::InvalidTetrahedron(format!("P{i} is not on H3")));
            }
        }
        for (j, l) in self.normals.iter().enumerate() {
            if !l.is_unit_spacelike(tol) {
                return Err(LorentzError::InvalidTetrahedron(format!("L{j} is not unit spacelike")));
            }
        }
        for (i, p) in self.vertices.iter().enumerate() {
            for (j, l) in self.normals.iter().enumerate() {
                if i != j && lorentz_inner(p, l).abs() > tol {
                    return Err(LorentzError::InvalidTetrahedron(format!("P{i} is not on face T{j}")));
                }
            }
        }
        Ok(())
    }

    /// R_m ∘ R_n.
    pub fn reflection_pair(&self, m: usize, n: usize) -> ReflectionWord {
        ReflectionWord(vec![self.normals[m], self.normals[n]])
    }
}

/// |⟨Lᵢ,Lⱼ⟩| over the six unordered pairs, sorted ascending.
pub fn dihedral_data(t: &Tetrahedron) -> [f64; 6] {
    let mut out = [0.0; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            out[k] = lorentz_inner(&t.normals[i], &t.normals[j]).abs();
            k += 1;
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn inner_products() {
        let t = Tetrahedron::canonical();
        assert!((lorentz_inner(&t.vertices[0], &t.vertices[0]) + 1.0).abs() < 1e-15);
        assert!((lorentz_inner(&t.normals[1], &t.normals[2]) - 0.5).abs() < 1e-12);
        let l02 = lorentz_inner(&t.normals[0], &t.normals[2]);
        assert!((l02 - (PI / 5.0).cos()).abs() < 1e-12);
        assert!((l02 - 0.5 * ((3.0 + 5f64.sqrt()) / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn canonical_is_valid() {
        Tetrahedron::canonical().validate(1e-9).unwrap();
    }

    #[test]
    fn dihedral_multiset() {
        let d = dihedral_data(&Tetrahedron::canonical());
        let mut want = [0.0, 0.0, 0.0, (PI / 5.0).cos(), (PI / 3.0).cos(), (PI / 4.0).cos()];
        want.sort_by(f64::total_cmp);
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
        let mut same = Tetrahedron::canonical();
        same.normals = [same.normals[3]; 4];
        assert_eq!(dihedral_data(&same).map(|v| (v * 1e12).round()), [1e12; 6]);
        let mut perm = Tetrahedron::canonical();
        perm.normals.swap(0, 3);
        perm.vertices.swap(0, 3);
        assert_eq!(dihedral_data(&perm), d);
    }

    #[test]
    fn reflections() {
        let t = Tetrahedron::canonical();
        let l = t.normals[0];
        let m = reflect(&l, &l, 1e-9).unwrap();
        assert!(m.max_abs_diff(&(-1.0 * l)) < 1e-14);
        let p1 = t.vertices[1];
        assert!(reflect(&p1, &l, 1e-9).unwrap().max_abs_diff(&p1) < 1e-12);
        let p0 = t.vertices[0];
        let back = reflect(&reflect(&p0, &l, 1e-9).unwrap(), &l, 1e-9).unwrap();
        assert!(back.max_abs_diff(&p0) < 1e-12);
        assert!(matches!(
            reflect(&p0, &LorentzVec::new(0.0, 2.0, 0.0, 0.0), 1e-9),
            Err(LorentzError::NotUnitNormal(_))
        ));
    }

    #[test]
    fn hermitian_dictionary() {
        let v = LorentzVec::new(1.3, -0.2, 0.7, 0.4);
        let h = Hermitian::from_vec(&v);
        assert!(h.to_vec().max_abs_diff(&v) < 1e-15);
        assert!((h.det() + lorentz_inner(&v, &v)).abs() < 1e-14);
        let id = UnimodularMatrix::identity();
        assert_eq!(act(&h, &id), h);
        let bad = Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0));
        assert!(matches!(Hermitian::try_new(bad, 1e-12), Err(LorentzError::NotHermitian(_))));
        assert!(lift_check(&id, &ReflectionWord::default(), 1e-9).unwrap() == 0.0);
    }
}
