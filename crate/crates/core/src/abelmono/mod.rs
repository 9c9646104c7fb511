//! The abelianization family ∇^{a,χ,r} on the punctured rectangular torus
//! C/(Z + iτZ): special functions, transport, monodromy and the η-invariant
//! real slices.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::C64;

mod baker;
mod jacobian;
mod locus;
mod matching;
mod monodromy;
mod path;
mod sigma;
mod transport;

pub use baker::{baker_section, BakerSection, Sign};
pub use jacobian::{jacobian_rank, JacobianOptions, JacobianReport};
pub use locus::{
    admissible_slice, analytic_overlay, locus_scan, real_locus_sweep, ChiChoice, LocusRow, LocusTable,
    SliceLine, SweepOptions,
};
pub use matching::{match_y, MatchOptions, MatchResult};
pub use monodromy::{homotopy_deviation, monodromies, monodromies_with, MonodromyResidual, MonodromyResult};
pub use path::{basepoint, default_clearance, Segment, TorusPath};
pub use sigma::Lattice;
pub use transport::{
    connection_form, parallel_transport, ConnectionForm, ConnectionPotential, DiagonalForm, Transport,
    TransportOptions, ZeroForm,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("chi = {0} is a half-lattice point")]
    NonGenericChi(C64),
    #[error("Legendre relation violated by {0:e}")]
    Legendre(f64),
    #[error("step budget of {budget} exhausted")]
    StepLimitExceeded { budget: usize },
    #[error("path passes within {distance} of the lattice (needs {required})")]
    PathTooCloseToPole { distance: f64, required: f64 },
    #[error("integration produced non-finite values")]
    NonFinite,
    #[error("chi = {0} does not lie on an eta-admissible line")]
    NotAdmissible(C64),
    #[error("bracket values {f_lo} and {f_hi} do not straddle the target")]
    BracketDoesNotStraddle { f_lo: f64, f_hi: f64 },
    #[error("no convergence after {0} evaluations")]
    MaxIterations(usize),
    #[error("a = {a} is within 0.05 of the reducible point {a0}")]
    NearReduciblePoint { a: f64, a0: f64 },
}

/// (a, χ, r, τ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionParams {
    pub a: C64,
    pub chi: C64,
    pub r: f64,
    pub tau: f64,
}

impl ConnectionParams {
    pub fn new(a: C64, chi: C64, r: f64, tau: f64) -> Self {
        Self { a, chi, r, tau }
    }

    pub fn validate(&self) -> Result<(), AbelError> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(AbelError::InvalidParams(format!("tau = {} must be positive", self.tau)));
        }
        if !(self.r > 0.0 && self.r < 0.5) {
            return Err(AbelError::InvalidParams(format!("r = {} outside (0, 1/2)", self.r)));
        }
        if !(self.a.is_finite() && self.chi.is_finite()) {
            return Err(AbelError::InvalidParams("a and chi must be finite".into()));
        }
        Ok(())
    }
}

/// Which of the four η-invariance conditions (a, χ) satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum EtaCase {
    /// χ ∈ R and a ∈ R.
    Real,
    /// χ + kπi/2 ∈ R and a − kπi/2 ∈ R, k ≠ 0.
    ShiftedReal { k: i64 },
    /// χ ∈ iR and a ∈ iR.
    Imaginary,
    /// χ + kπ/(2τ) ∈ iR and a − kπ/(2τ) ∈ iR, k ≠ 0.
    ShiftedImaginary { k: i64 },
}

impl EtaCase {
    /// Line number 1–4.
    pub fn line(&self) -> u8 {
        match self {
            EtaCase::Real => 1,
            EtaCase::ShiftedReal { .. } => 2,
            EtaCase::Imaginary => 3,
            EtaCase::ShiftedImaginary { .. } => 4,
        }
    }
}

fn integer_multiple(v: f64, unit: f64, tol: f64) -> Option<i64> {
    let k = (v / unit).round();
    ((v - k * unit).abs() <= tol).then_some(k as i64)
}

pub fn eta_case(p: &ConnectionParams) -> Option<EtaCase> {
    const TOL: f64 = 1e-12;
    let (a, chi) = (p.a, p.chi);
    if let Some(k) = integer_multiple(-chi.im, PI / 2.0, TOL) {
        if (a.im - k as f64 * PI / 2.0).abs() <= TOL {
            return Some(if k == 0 { EtaCase::Real } else { EtaCase::ShiftedReal { k } });
        }
    }
    let unit = PI / (2.0 * p.tau);
    if let Some(k) = integer_multiple(-chi.re, unit, TOL) {
        if (a.re - k as f64 * unit).abs() <= TOL {
            return Some(if k == 0 { EtaCase::Imaginary } else { EtaCase::ShiftedImaginary { k } });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: C64, chi: C64) -> ConnectionParams {
        ConnectionParams::new(a, chi, 0.1, 1.0)
    }

    #[test]
    fn eta_cases() {
        assert_eq!(eta_case(&p(C64::new(0.2, 0.0), C64::new(0.3, 0.0))), Some(EtaCase::Real));
        let c = eta_case(&p(C64::new(0.1, -PI / 2.0), C64::new(0.4, PI / 2.0)));
        assert_eq!(c, Some(EtaCase::ShiftedReal { k: -1 }));
        assert_eq!(c.unwrap().line(), 2);
        assert_eq!(eta_case(&p(C64::new(0.0, 0.3), C64::new(0.0, PI / 4.0))), Some(EtaCase::Imaginary));
        let c = eta_case(&p(C64::new(PI / 2.0, 0.3), C64::new(-PI / 2.0, 0.7)));
        assert_eq!(c, Some(EtaCase::ShiftedImaginary { k: 1 }));
        assert_eq!(eta_case(&p(C64::new(1.0, 1.0), C64::new(2.0, 3.0))), None);
    }

    #[test]
    fn validation() {
        assert!(ConnectionParams::new(C64::new(0.0, 0.0), C64::new(0.3, 0.2), 0.6, 1.0).validate().is_err());
        assert!(ConnectionParams::new(C64::new(0.0, 0.0), C64::new(0.3, 0.2), 0.1, -1.0).validate().is_err());
        assert!(ConnectionParams::new(C64::new(0.0, 0.0), C64::new(0.3, 0.2), 0.1, 1.0).validate().is_ok());
    }
}
