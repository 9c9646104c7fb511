//! Spin structures on the torus as Z₂ monodromies, their behaviour under
//! grafting, and the dictionary to half-lattice values of χ.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::abelmono::{Segment, TorusPath};
use crate::algebra::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("expected a positive value, got {0}")]
    NonPositiveInput(f64),
    #[error("malformed spin class {0:?}; expected e.g. +,-")]
    MalformedSpin(String),
    #[error("unknown grafting curve {0:?}; expected x or y")]
    UnknownCurve(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    X,
    Y,
}

impl Curve {
    /// Parses a sequence such as "xyx".
    pub fn parse_sequence(s: &str) -> Result<Vec<Curve>, SpinError> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c.to_ascii_lowercase() {
                'x' => Ok(Curve::X),
                'y' => Ok(Curve::Y),
                other => Err(SpinError::UnknownCurve(other)),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpinClass {
    pub eps_x: i8,
    pub eps_y: i8,
}

impl SpinClass {
    pub const TRIVIAL: SpinClass = SpinClass { eps_x: 1, eps_y: 1 };

    pub fn new(eps_x: i8, eps_y: i8) -> Result<Self, SpinError> {
        let ok = |e: i8| e == 1 || e == -1;
        if ok(eps_x) && ok(eps_y) {
            Ok(Self { eps_x, eps_y })
        } else {
            Err(SpinError::MalformedSpin(format!("{eps_x},{eps_y}")))
        }
    }

    pub fn all() -> [SpinClass; 4] {
        [(1, 1), (-1, 1), (1, -1), (-1, -1)].map(|(eps_x, eps_y)| SpinClass { eps_x, eps_y })
    }

    /// Quadratic form on H₁(T², Z₂) = {0, γ_x, γ_y, γ_x + γ_y}, values ±1.
    pub fn q(&self, cx: bool, cy: bool) -> i8 {
        match (cx, cy) {
            (false, false) => 1,
            (true, false) => self.eps_x,
            (false, true) => self.eps_y,
            (true, true) => -self.eps_x * self.eps_y,
        }
    }

    /// +1 for even, −1 for odd: the value q takes most often.
    pub fn arf(&self) -> i8 {
        let s: i8 = [self.q(true, false), self.q(false, true), self.q(true, true)].iter().sum();
        s.signum()
    }
}

impl fmt::Display for SpinClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |e: i8| if e > 0 { '+' } else { '-' };
        write!(f, "{},{}", c(self.eps_x), c(self.eps_y))
    }
}

impl FromStr for SpinClass {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpinError::MalformedSpin(s.to_string());
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let sign = |p: &str| match p {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            _ => Err(bad()),
        };
        SpinClass::new(sign(parts[0])?, sign(parts[1])?)
    }
}

/// Grafting along γ_y flips ε_x; grafting along γ_x flips ε_y.
pub fn graft_spin(s: SpinClass, curve: Curve) -> SpinClass {
    match curve {
        Curve::Y => SpinClass { eps_x: -s.eps_x, ..s },
        Curve::X => SpinClass { eps_y: -s.eps_y, ..s },
    }
}

pub fn spin_to_chi(s: SpinClass, tau: f64) -> C64 {
    let re = if s.eps_y < 0 { PI / (2.0 * tau) } else { 0.0 };
    let im = if s.eps_x < 0 { PI / 2.0 } else { 0.0 };
    C64::new(re, im)
}

// 5-point Gauss–Legendre on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn segment_integral(seg: &Segment, chi: C64, panels: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let s = mid + 0.5 * h * x;
            let dw = seg.velocity(s);
            acc += (chi * dw.conj() - chi.conj() * dw) * (0.5 * h * w);
        }
    }
    acc
}

/// Holonomy exp(−∮(χ dw̄ − χ̄ dw)) of the unitary connection d + χdw̄ − χ̄dw,
/// by composite Gauss–Legendre quadrature.
pub fn line_holonomy(chi: C64, path: &TorusPath) -> C64 {
    let integral: C64 = path.segments.iter().map(|s| segment_integral(s, chi, 64)).sum();
    (-integral).exp()
}

/// Conformal modulus of the Hopf torus attached to a grafting monodromy
/// of translation length ell.
pub trait HopfModel {
    fn modulus(&self, ell: f64) -> f64;
}

/// τ_Y = 2π/ell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DefaultHopf;

impl HopfModel for DefaultHopf {
    fn modulus(&self, ell: f64) -> f64 {
        2.0 * PI / ell
    }
}

fn positive(v: f64) -> Result<f64, SpinError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(SpinError::NonPositiveInput(v))
    }
}

pub fn hopf_modulus(ell: f64) -> Result<f64, SpinError> {
    positive(ell).map(|l| DefaultHopf.modulus(l))
}

/// (1/τ + 1/τ_Y)⁻¹ with τ_Y from the model.
pub fn graft_modulus_with(tau: f64, ell: f64, model: &dyn HopfModel) -> Result<f64, SpinError> {
    let tau = positive(tau)?;
    let ty = positive(model.modulus(positive(ell)?))?;
    Ok(1.0 / (1.0 / tau + 1.0 / ty))
}

pub fn graft_modulus(tau: f64, ell: f64) -> Result<f64, SpinError> {
    graft_modulus_with(tau, ell, &DefaultHopf)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraftState {
    pub tau: f64,
    pub spin: SpinClass,
    pub n_x: u32,
    pub n_y: u32,
}

impl GraftState {
    pub fn new(tau: f64, spin: SpinClass) -> Result<Self, SpinError> {
        Ok(Self { tau: positive(tau)?, spin, n_x: 0, n_y: 0 })
    }

    pub fn graft(&self, curve: Curve, ell: f64) -> Result<Self, SpinError> {
        self.graft_with(curve, ell, &DefaultHopf)
    }

    /// Along y the modulus composes harmonically; along x the same rule is
    /// applied to the transposed torus of modulus 1/τ.
    pub fn graft_with(&self, curve: Curve, ell: f64, model: &dyn HopfModel) -> Result<Self, SpinError> {
        let spin = graft_spin(self.spin, curve);
        Ok(match curve {
            Curve::Y => Self { tau: graft_modulus_with(self.tau, ell, model)?, spin, n_y: self.n_y + 1, ..*self },
            Curve::X => Self {
                tau: 1.0 / graft_modulus_with(1.0 / self.tau, ell, model)?,
                spin,
                n_x: self.n_x + 1,
                ..*self
            },
        })
    }

    pub fn chi(&self) -> C64 {
        spin_to_chi(self.spin, self.tau)
    }
}
