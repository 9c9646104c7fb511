//! Fricke character varieties of the once-punctured torus and the
//! four-punctured sphere, and the abelianization trace map between them.
//!
//! Residuals are returned as complex numbers; for real inputs they are real.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Mat2, UnimodularMatrix, C64, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharVarError {
    #[error("malformed weight '{0}', expected l/k")]
    MalformedWeight(String),
    #[error("weight {0}/{1} has sphere weight outside (1/4, 1/2)")]
    WeightOutOfRange(i64, i64),
    #[error("traces are degenerate: some coordinate equals 2")]
    DegenerateTraces,
    #[error("trace x = {0} is ±2; no diagonal normal form")]
    DegenerateTrace(C64),
    #[error("point is off the character variety (|residual| = {0:e})")]
    OffVariety(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn parse_fraction(s: &str) -> Result<(i64, i64), CharVarError> {
    let bad = || CharVarError::MalformedWeight(s.to_string());
    let (l, k) = s.trim().split_once('/').ok_or_else(bad)?;
    let l: i64 = l.trim().parse().map_err(|_| bad())?;
    let k: i64 = k.trim().parse().map_err(|_| bad())?;
    if k <= 0 {
        return Err(bad());
    }
    Ok((l, k))
}

/// A rational local weight, stored as the sphere weight r̃ = l/k in lowest
/// terms with r̃ ∈ (1/4, 1/2). The torus weight is r = 2r̃ − 1/2 ∈ (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    l: i64,
    k: i64,
}

impl Weight {
    /// Sphere weight r̃ = l/k, reduced to lowest terms.
    pub fn sphere(l: i64, k: i64) -> Result<Self, CharVarError> {
        if k <= 0 || l <= 0 {
            return Err(CharVarError::WeightOutOfRange(l, k));
        }
        let g = gcd(l, k);
        let (l, k) = (l / g, k / g);
        if 4 * l <= k || 2 * l >= k {
            return Err(CharVarError::WeightOutOfRange(l, k));
        }
        Ok(Self { l, k })
    }

    /// Torus weight r = l/k, converted through r̃ = (1 + 2r)/4.
    pub fn torus(l: i64, k: i64) -> Result<Self, CharVarError> {
        if k <= 0 {
            return Err(CharVarError::WeightOutOfRange(l, k));
        }
        Self::sphere(k + 2 * l, 4 * k).map_err(|_| CharVarError::WeightOutOfRange(l, k))
    }

    /// Parses `l/k` as a sphere weight. With `normalize`, r̃ ∈ (0, 1/4) is
    /// replaced by 1/2 − r̃, which leaves trace coordinates unchanged.
    pub fn parse_sphere(s: &str, normalize: bool) -> Result<Self, CharVarError> {
        let (l, k) = parse_fraction(s)?;
        if normalize && l > 0 && 4 * l < k {
            return Self::sphere(k - 2 * l, 2 * k);
        }
        Self::sphere(l, k)
    }

    /// Parses `l/k` as a torus weight. With `normalize`, r ∈ (−1/2, 0) is
    /// replaced by −r (the torus image of r̃ ↦ 1/2 − r̃).
    pub fn parse_torus(s: &str, normalize: bool) -> Result<Self, CharVarError> {
        let (l, k) = parse_fraction(s)?;
        if normalize && l < 0 {
            return Self::torus(-l, k);
        }
        Self::torus(l, k)
    }

    pub fn numerator(&self) -> i64 {
        self.l
    }

    /// Denominator of r̃; the order of the local conjugacy class.
    pub fn order(&self) -> i64 {
        self.k
    }

    pub fn sphere_weight(&self) -> f64 {
        self.l as f64 / self.k as f64
    }

    pub fn torus_weight(&self) -> f64 {
        2.0 * self.sphere_weight() - 0.5
    }

    /// r = 2r̃ − 1/2 as a reduced fraction.
    pub fn torus_fraction(&self) -> (i64, i64) {
        let (n, d) = (4 * self.l - self.k, 2 * self.k);
        let g = gcd(n, d);
        (n / g, d / g)
    }

    /// μ = 2cos(2πr̃).
    pub fn mu(&self) -> f64 {
        2.0 * (2.0 * PI * self.sphere_weight()).cos()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.l, self.k)
    }
}

impl FromStr for Weight {
    type Err = CharVarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_sphere(s, false)
    }
}

/// Anything that determines the torus weight r.
pub trait TorusWeight {
    fn r(&self) -> f64;

    /// 2cos(2πr), the trace of the local monodromy.
    fn c(&self) -> f64 {
        2.0 * (2.0 * PI * self.r()).cos()
    }

    /// μ = 2cos(2πr̃) with r̃ = (1 + 2r)/4.
    fn mu(&self) -> f64 {
        2.0 * (PI * (1.0 + 2.0 * self.r()) / 2.0).cos()
    }
}

impl TorusWeight for Weight {
    fn r(&self) -> f64 {
        self.torus_weight()
    }
}

impl TorusWeight for f64 {
    fn r(&self) -> f64 {
        *self
    }
}

impl<T: TorusWeight> TorusWeight for &T {
    fn r(&self) -> f64 {
        (*self).r()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCoords {
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

impl TraceCoords {
    pub fn new(x: C64, y: C64, z: C64) -> Self {
        Self { x, y, z }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    /// (tr X, tr Y, tr YX).
    pub fn of_pair(x: &UnimodularMatrix, y: &UnimodularMatrix) -> Self {
        Self::new(x.trace(), y.trace(), (*y * *x).trace())
    }

    pub fn max_imag(&self) -> f64 {
        self.x.im.abs().max(self.y.im.abs()).max(self.z.im.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereTraceCoords {
    pub xt: C64,
    pub yt: C64,
    pub zt: C64,
    pub mu: f64,
}

impl SphereTraceCoords {
    pub fn new(xt: C64, yt: C64, zt: C64, mu: f64) -> Self {
        Self { xt, yt, zt, mu }
    }

    /// (tr M₂M₁, tr M₃M₂, tr M₃M₁).
    pub fn of_quadruple(m: &[UnimodularMatrix; 4], mu: f64) -> Self {
        Self::new((m[1] * m[0]).trace(), (m[2] * m[1]).trace(), (m[2] * m[0]).trace(), mu)
    }
}

/// Torus monodromies X, Y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusRep {
    pub x: UnimodularMatrix,
    pub y: UnimodularMatrix,
}

impl TorusRep {
    pub fn traces(&self) -> TraceCoords {
        TraceCoords::of_pair(&self.x, &self.y)
    }

    /// Y⁻¹X⁻¹YX, the loop around the puncture.
    pub fn commutator(&self) -> UnimodularMatrix {
        self.y.inverse() * self.x.inverse() * self.y * self.x
    }
}

/// Sphere monodromies with M₄M₃M₂M₁ = Id.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereRep {
    pub m: [UnimodularMatrix; 4],
}

impl SphereRep {
    pub fn product(&self) -> UnimodularMatrix {
        self.m[3] * self.m[2] * self.m[1] * self.m[0]
    }

    pub fn product_defect(&self) -> f64 {
        self.product().dist(&UnimodularMatrix::identity())
    }
}

/// x² + y² + z² − xyz − 2 − 2cos(2πr).
pub fn fricke_torus_residual(t: &TraceCoords, w: impl TorusWeight) -> C64 {
    let TraceCoords { x, y, z } = *t;
    x * x + y * y + z * z - x * y * z - 2.0 - w.c()
}

/// x̃² + ỹ² + z̃² + x̃ỹz̃ − 2μ²(x̃ + ỹ + z̃) + 4(μ² − 1) + μ⁴.
pub fn fricke_sphere_residual(s: &SphereTraceCoords) -> C64 {
    let SphereTraceCoords { xt, yt, zt, mu } = *s;
    let m2 = mu * mu;
    xt * xt + yt * yt + zt * zt + xt * yt * zt - 2.0 * m2 * (xt + yt + zt) + 4.0 * (m2 - 1.0) + m2 * m2
}

/// (2 − x², 2 − y², 2 − z²) with μ taken at r̃ = (1 + 2r)/4.
pub fn abelianize(t: &TraceCoords, w: impl TorusWeight) -> SphereTraceCoords {
    let two = C64::new(2.0, 0.0);
    SphereTraceCoords::new(two - t.x * t.x, two - t.y * t.y, two - t.z * t.z, w.mu())
}

fn principal_root_re_nonneg(z: C64) -> C64 {
    let s = z.sqrt();
    if s.re < 0.0 {
        -s
    } else {
        s
    }
}

/// All sign choices (±x, ±y, ±z), x = √(2 − x̃) etc., that solve the torus
/// equation to `tol`.
pub fn lift_traces(
    s: &SphereTraceCoords,
    w: impl TorusWeight,
    tol: f64,
) -> Result<Vec<TraceCoords>, CharVarError> {
    let two = C64::new(2.0, 0.0);
    if [s.xt, s.yt, s.zt].iter().any(|v| (*v - two).norm() <= tol) {
        return Err(CharVarError::DegenerateTraces);
    }
    let x = principal_root_re_nonneg(two - s.xt);
    let y = principal_root_re_nonneg(two - s.yt);
    let z = principal_root_re_nonneg(two - s.zt);
    let mut out = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let t = TraceCoords::new(x * sx, y * sy, z * sz);
                if fricke_torus_residual(&t, &w).norm() <= tol {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// Roots of z² − xyz + (x² + y² − 2 − 2cos 2πr); the first has the principal
/// square root of the discriminant.
pub fn solve_z(x: C64, y: C64, w: impl TorusWeight) -> (C64, C64) {
    let b = x * y;
    let c = x * x + y * y - 2.0 - w.c();
    let sd = (b * b - 4.0 * c).sqrt();
    // Form the larger root without cancellation, the other from the product.
    let aligned = (b.conj() * sd).re >= 0.0;
    let big = if aligned { (b + sd) * 0.5 } else { (b - sd) * 0.5 };
    let small = if big.norm() > 0.0 { c / big } else { ZERO };
    if aligned {
        (big, small)
    } else {
        (small, big)
    }
}

/// x²y² − 4x² − 4y² + 8(1 + cos 2πr). This is the discriminant of the
/// quadratic in [`solve_z`]; it vanishes exactly where the two roots meet.
pub fn eta_locus_residual(x: f64, y: f64, w: impl TorusWeight) -> f64 {
    let (x2, y2) = (x * x, y * y);
    x2 * y2 - 4.0 * x2 - 4.0 * y2 + 8.0 + 4.0 * w.c()
}

/// Positive branch of y² = (4x² − 8(1 + cos 2πr))/(x² − 4), where defined.
pub fn eta_locus_y(x: f64, w: impl TorusWeight) -> Option<f64> {
    let den = x * x - 4.0;
    if den == 0.0 {
        return None;
    }
    let y2 = (4.0 * x * x - 8.0 - 4.0 * w.c()) / den;
    (y2 >= 0.0 && y2.is_finite()).then(|| y2.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "component", rename_all = "lowercase")]
pub enum RealClass {
    Su2,
    /// Sign vector of (x, y, z).
    Sl2r([i8; 3]),
    NotReal,
}

/// Real-locus classification of an on-variety point. `tol` bounds both the
/// residual and the imaginary parts.
pub fn classify_real(
    t: &TraceCoords,
    w: impl TorusWeight,
    tol: f64,
) -> Result<RealClass, CharVarError> {
    let res = fricke_torus_residual(t, &w).norm();
    if !(res <= tol) {
        return Err(CharVarError::OffVariety(res));
    }
    if t.max_imag() > tol {
        return Ok(RealClass::NotReal);
    }
    let v = [t.x.re, t.y.re, t.z.re];
    if v.iter().all(|c| c.abs() <= 2.0 + tol) {
        return Ok(RealClass::Su2);
    }
    let sign = |c: f64| if c < 0.0 { -1 } else { 1 };
    Ok(RealClass::Sl2r([sign(v[0]), sign(v[1]), sign(v[2])]))
}

/// X = diag(λ, 1/λ) with |λ| ≥ 1 and Y = [[α, 1], [γ, δ]] realizing (x, y, z).
pub fn reconstruct_rep(t: &TraceCoords, tol: f64) -> Result<TorusRep, CharVarError> {
    let two = C64::new(2.0, 0.0);
    if (t.x - two).norm() <= tol || (t.x + two).norm() <= tol {
        return Err(CharVarError::DegenerateTrace(t.x));
    }
    let mut lam = (t.x + (t.x * t.x - 4.0).sqrt()) * 0.5;
    if lam.norm() < 1.0 {
        lam = lam.inv();
    }
    let li = lam.inv();
    let alpha = (t.z - t.y * li) / (lam - li);
    let delta = t.y - alpha;
    let gamma = alpha * delta - ONE;
    // Both determinants equal 1 by construction, up to rounding.
    let x = UnimodularMatrix::from_raw(Mat2::diag(lam, li));
    let y = UnimodularMatrix::from_raw(Mat2::new(alpha, ONE, gamma, delta));
    Ok(TorusRep { x, y })
}

/// k odd → k − 1; k even → k/2 − 1.
pub fn genus_of_order(k: i64) -> i64 {
    if k % 2 == 1 {
        k - 1
    } else {
        k / 2 - 1
    }
}

pub fn genus_of_weight(w: &Weight) -> i64 {
    genus_of_order(w.order())
}
