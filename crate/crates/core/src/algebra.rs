//! 2×2 complex matrix algebra for SL(2,C).
//!
//! Words are written left to right and composed right to left: the word
//! `γ₂γ₁` traverses `γ₁` first and evaluates to `ρ(γ₂)ρ(γ₁)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

use crate::tolerances::TOL_ALG;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("determinant {det} is not 1 (|det-1| = {dev:e})")]
    NotUnimodular { det: C64, dev: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("generator index {index} outside alphabet of size {len}")]
    IndexOutOfAlphabet { index: usize, len: usize },
    #[error("exponent {0} is not +1 or -1")]
    BadExponent(i8),
}

/// A general 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(p: C64, q: C64) -> Self {
        Self::new(p, ZERO, ZERO, q)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Adjugate; equals the inverse when det = 1.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(AlgebraError::Singular);
        }
        Ok(self.adjugate().scale(det.inv()))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Max-abs entry norm.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn max_imag(&self) -> f64 {
        self.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// An element of SL(2,C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodularMatrix(Mat2);

impl UnimodularMatrix {
    /// Checked constructor: rejects `|det − 1| > tol_alg`.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, AlgebraError> {
        Self::try_from_mat(Mat2::new(a, b, c, d), TOL_ALG)
    }

    pub fn try_from_mat(m: Mat2, tol: f64) -> Result<Self, AlgebraError> {
        let det = m.det();
        let dev = (det - ONE).norm();
        if !(dev <= tol) || !m.is_finite() {
            return Err(AlgebraError::NotUnimodular { det, dev });
        }
        Ok(Self(m))
    }

    /// Rescales by a square root of the determinant.
    pub fn normalize(m: Mat2) -> Result<Self, AlgebraError> {
        let det = m.det();
        if det.norm() == 0.0 || !m.is_finite() {
            return Err(AlgebraError::Singular);
        }
        Ok(Self(m.scale(det.sqrt().inv())))
    }

    /// Wraps without checking. Used for integrator output, whose determinant
    /// drift is reported separately.
    pub(crate) fn from_raw(m: Mat2) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn det(&self) -> C64 {
        self.0.det()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjugate())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::identity();
        let mut sq = base.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        Self(acc)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.0.dist(&other.0)
    }

    /// Distance to the nearer of ±Id.
    pub fn dist_to_center(&self) -> f64 {
        let id = Mat2::identity();
        self.0.dist(&id).min(self.0.dist(&-id))
    }
}

impl Mul for UnimodularMatrix {
    type Output = UnimodularMatrix;
    fn mul(self, o: UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix(self.0 * o.0)
    }
}

impl Neg for UnimodularMatrix {
    type Output = UnimodularMatrix;
    fn neg(self) -> UnimodularMatrix {
        UnimodularMatrix(-self.0)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m.a, m.b, m.c, m.d)
    }
}

/// `[[re,im],[re,im],[re,im],[re,im]]`, row-major.
impl Serialize for UnimodularMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for z in self.0.entries() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

pub fn multiply(a: &UnimodularMatrix, b: &UnimodularMatrix) -> UnimodularMatrix {
    *a * *b
}

/// Smallest `n ≤ max_order` with `‖Aⁿ − Id‖∞ ≤ tol`.
pub fn order_of(a: &UnimodularMatrix, max_order: u32, tol: f64) -> Option<u32> {
    let id = Mat2::identity();
    let mut p = *a.mat();
    for n in 1..=max_order {
        if p.dist(&id) <= tol {
            return Some(n);
        }
        p = p * *a.mat();
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjugacyClass {
    Central,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

pub fn classify(a: &UnimodularMatrix, tol: f64) -> ConjugacyClass {
    if a.dist_to_center() <= tol {
        return ConjugacyClass::Central;
    }
    let t = a.trace();
    if t.im.abs() > tol {
        return ConjugacyClass::Loxodromic;
    }
    let abs = t.re.abs();
    if (abs - 2.0).abs() <= tol {
        ConjugacyClass::Parabolic
    } else if abs < 2.0 {
        ConjugacyClass::Elliptic
    } else {
        ConjugacyClass::Hyperbolic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Result<Self, AlgebraError> {
        if exponent != 1 && exponent != -1 {
            return Err(AlgebraError::BadExponent(exponent));
        }
        Ok(Self { generator, exponent })
    }

    pub fn inverse(self) -> Self {
        Self { generator: self.generator, exponent: -self.exponent }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// Expands `[(g, k), ...]` into `g^k ...`, written left to right.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(g, k) in powers {
            let e = if k < 0 { -1 } else { 1 };
            for _ in 0..k.unsigned_abs() {
                letters.push(Letter { generator: g, exponent: e });
            }
        }
        Self { letters }
    }

    pub fn generator(g: usize) -> Self {
        Self::from_powers(&[(g, 1)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Cancels adjacent `g g⁻¹` pairs.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord { letters: out }
    }

    /// Exponent sum of each generator under a homomorphism to Z.
    pub fn weighted_exponent_sum(&self, weights: &[i64]) -> i64 {
        self.letters
            .iter()
            .map(|l| weights.get(l.generator).copied().unwrap_or(0) * l.exponent as i64)
            .sum()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exponent < 0 {
                write!(f, "g{}^-1", l.generator)?;
            } else {
                write!(f, "g{}", l.generator)?;
            }
        }
        Ok(())
    }
}

pub fn evaluate_word(
    w: &GroupWord,
    alphabet: &[UnimodularMatrix],
) -> Result<UnimodularMatrix, AlgebraError> {
    let mut acc = Mat2::identity();
    for l in w.letters() {
        let g = alphabet
            .get(l.generator)
            .ok_or(AlgebraError::IndexOutOfAlphabet { index: l.generator, len: alphabet.len() })?;
        let m = if l.exponent < 0 { g.inverse() } else { *g };
        acc = acc * *m.mat();
    }
    Ok(UnimodularMatrix(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn checked_constructor_rejects_bad_det() {
        assert!(UnimodularMatrix::new(ONE, ZERO, ZERO, c(2.0, 0.0)).is_err());
        assert!(UnimodularMatrix::new(ONE, c(3.0, 1.0), ZERO, ONE).is_ok());
    }

    #[test]
    fn normalize_fixes_det() {
        let m = UnimodularMatrix::normalize(Mat2::real(2.0, 1.0, 0.5, 3.0)).unwrap();
        assert!((m.det() - ONE).norm() < 1e-14);
        assert_eq!(UnimodularMatrix::normalize(Mat2::zero()), Err(AlgebraError::Singular));
    }

    #[test]
    fn identity_orders_and_classes() {
        let id = UnimodularMatrix::identity();
        assert_eq!(order_of(&id, 10, TOL_ALG), Some(1));
        assert_eq!(classify(&id, TOL_ALG), ConjugacyClass::Central);
        assert_eq!(classify(&-id, TOL_ALG), ConjugacyClass::Central);
        let e = UnimodularMatrix::new(I, ZERO, ZERO, -I).unwrap();
        assert_eq!(classify(&e, TOL_ALG), ConjugacyClass::Elliptic);
        assert_eq!(order_of(&e, 10, TOL_ALG), Some(4));
        let p = UnimodularMatrix::new(ONE, ONE, ZERO, ONE).unwrap();
        assert_eq!(classify(&p, TOL_ALG), ConjugacyClass::Parabolic);
        assert_eq!(order_of(&p, 50, TOL_ALG), None);
        let h = UnimodularMatrix::new(c(2.0, 0.0), ZERO, ZERO, c(0.5, 0.0)).unwrap();
        assert_eq!(classify(&h, TOL_ALG), ConjugacyClass::Hyperbolic);
        let l = UnimodularMatrix::new(c(1.0, 1.0), ZERO, ZERO, c(0.5, -0.5)).unwrap();
        assert_eq!(classify(&l, TOL_ALG), ConjugacyClass::Loxodromic);
    }

    #[test]
    fn words() {
        let a = UnimodularMatrix::new(ONE, c(2.0, 0.0), ZERO, ONE).unwrap();
        let b = UnimodularMatrix::new(ONE, ZERO, c(0.0, 3.0), ONE).unwrap();
        let alph = [a, b];
        assert_eq!(evaluate_word(&GroupWord::empty(), &alph).unwrap(), UnimodularMatrix::identity());
        let w = GroupWord::from_powers(&[(0, -1), (0, 1)]);
        assert!(evaluate_word(&w, &alph).unwrap().dist(&UnimodularMatrix::identity()) < 1e-15);
        let ab = evaluate_word(&GroupWord::from_powers(&[(0, 1), (1, 1)]), &alph).unwrap();
        assert!(ab.dist(&(a * b)) < 1e-15);
        let bad = GroupWord::generator(2);
        assert_eq!(
            evaluate_word(&bad, &alph),
            Err(AlgebraError::IndexOutOfAlphabet { index: 2, len: 2 })
        );
        let w = GroupWord::from_powers(&[(0, 2), (1, -1)]);
        let v = evaluate_word(&w.concat(&w.inverse()), &alph).unwrap();
        assert!(v.dist(&UnimodularMatrix::identity()) < 1e-12);
        assert!(w.concat(&w.inverse()).reduced().is_empty());
        assert_eq!(Letter::new(0, 2), Err(AlgebraError::BadExponent(2)));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = UnimodularMatrix::normalize(Mat2::new(c(1.0, 0.5), c(0.2, 0.0), c(0.1, -0.3), ONE))
            .unwrap();
        let p = a.pow(5);
        let q = a * a * a * a * a;
        assert!(p.dist(&q) < 1e-12);
        assert!((a.pow(-3) * a.pow(3)).dist(&UnimodularMatrix::identity()) < 1e-12);
    }
}
