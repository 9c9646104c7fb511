//! Doubly periodic off-diagonal sections with a simple pole at the origin.

use std::f64::consts::PI;

use crate::algebra::C64;

use super::sigma::Lattice;
use super::AbelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// ψ(w) = c·e^{βw}·σ(w−p)/σ(w)·e^{−λw̄}, λ = ∓2χ, periodic in Λ, with
/// residue r at w = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BakerSection {
    lattice: Lattice,
    lambda: C64,
    p: C64,
    beta: C64,
    c: C64,
}

/// Zero of ψ for exponent λ; periodicity forces p = −τλ/π.
fn zero_location(lambda: C64, tau: f64) -> C64 {
    -lambda * (tau / PI)
}

impl BakerSection {
    pub fn new(sign: Sign, chi: C64, r: f64, lattice: &Lattice) -> Result<Self, AbelError> {
        let lambda = match sign {
            Sign::Plus => -chi * 2.0,
            Sign::Minus => chi * 2.0,
        };
        let tau = lattice.tau();
        let p = zero_location(lambda, tau);
        if lattice.distance(p) < 1e-9 {
            return Err(AbelError::NonGenericChi(chi));
        }
        let beta = lambda + lattice.eta1() * p;
        let c = -r / lattice.sigma(p);
        if !c.is_finite() {
            return Err(AbelError::NonGenericChi(chi));
        }
        Ok(Self { lattice: *lattice, lambda, p, beta, c })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn zero(&self) -> C64 {
        self.p
    }

    pub fn eval(&self, w: C64) -> C64 {
        self.eval_with_sigma(w, self.lattice.sigma(w))
    }

    /// Same as [`eval`](Self::eval) with σ(w) supplied by the caller.
    pub fn eval_with_sigma(&self, w: C64, sigma_w: C64) -> C64 {
        self.c * (self.beta * w - self.lambda * w.conj()).exp() * self.lattice.sigma(w - self.p) / sigma_w
    }
}

pub fn baker_section(sign: Sign, chi: C64, r: f64, tau: f64) -> Result<BakerSection, AbelError> {
    BakerSection::new(sign, chi, r, &Lattice::new(tau)?)
}
