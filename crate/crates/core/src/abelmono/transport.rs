//! Connection forms and adaptive parallel transport.

use crate::algebra::{Mat2, UnimodularMatrix, C64};

use super::baker::{BakerSection, Sign};
use super::path::{default_clearance, TorusPath};
use super::sigma::Lattice;
use super::{AbelError, ConnectionParams};

/// A connection d + A_w dw + A_w̄ dw̄ in a global trivialization.
pub trait ConnectionPotential: Sync {
    /// (A_w, A_w̄) at w.
    fn potential(&self, w: C64) -> (Mat2, Mat2);
}

/// A_w = [[a, ψ⁻], [ψ⁺, −a]], A_w̄ = diag(χ, −χ).
#[derive(Debug, Clone, Copy)]
pub struct ConnectionForm {
    params: ConnectionParams,
    lattice: Lattice,
    plus: BakerSection,
    minus: BakerSection,
}

impl ConnectionForm {
    pub fn new(p: &ConnectionParams) -> Result<Self, AbelError> {
        p.validate()?;
        let lattice = Lattice::new(p.tau)?;
        let plus = BakerSection::new(Sign::Plus, p.chi, p.r, &lattice)?;
        let minus = BakerSection::new(Sign::Minus, p.chi, p.r, &lattice)?;
        Ok(Self { params: *p, lattice, plus, minus })
    }

    pub fn params(&self) -> &ConnectionParams {
        &self.params
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The form with ψ± removed.
    pub fn diagonal_truncation(&self) -> DiagonalForm {
        DiagonalForm { a: self.params.a, chi: self.params.chi }
    }
}

impl ConnectionPotential for ConnectionForm {
    fn potential(&self, w: C64) -> (Mat2, Mat2) {
        let s = self.lattice.sigma(w);
        let a = self.params.a;
        let chi = self.params.chi;
        let aw = Mat2::new(a, self.minus.eval_with_sigma(w, s), self.plus.eval_with_sigma(w, s), -a);
        (aw, Mat2::diag(chi, -chi))
    }
}

/// d + diag(a, −a) dw + diag(χ, −χ) dw̄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalForm {
    pub a: C64,
    pub chi: C64,
}

impl ConnectionPotential for DiagonalForm {
    fn potential(&self, _w: C64) -> (Mat2, Mat2) {
        (Mat2::diag(self.a, -self.a), Mat2::diag(self.chi, -self.chi))
    }
}

/// The trivial connection d.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZeroForm;

impl ConnectionPotential for ZeroForm {
    fn potential(&self, _w: C64) -> (Mat2, Mat2) {
        (Mat2::zero(), Mat2::zero())
    }
}

pub fn connection_form(p: &ConnectionParams) -> Result<ConnectionForm, AbelError> {
    ConnectionForm::new(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Local error tolerance per step (mixed absolute/relative).
    pub tol: f64,
    /// Maximum accepted steps over the whole path.
    pub step_budget: usize,
    /// Required distance from the lattice; `None` uses 0.05·min(1, τ).
    pub clearance: Option<f64>,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { tol: 1e-12, step_budget: crate::tolerances::STEP_BUDGET, clearance: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transport {
    pub matrix: UnimodularMatrix,
    pub det_drift: f64,
    pub steps: usize,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(terms: &[(f64, &Mat2)]) -> Mat2 {
    let mut out = Mat2::zero();
    for (c, m) in terms {
        out = out + m.scale(C64::new(*c, 0.0));
    }
    out
}

/// Ψ' = −(A_w ẇ + A_w̄ conj(ẇ))Ψ, Ψ(0) = Id along `path`.
pub fn parallel_transport(
    form: &dyn ConnectionPotential,
    path: &TorusPath,
    opts: &TransportOptions,
) -> Result<Transport, AbelError> {
    let delta = opts.clearance.unwrap_or_else(|| default_clearance(path.tau));
    path.check_clearance(delta)?;

    let mut psi = Mat2::identity();
    let mut steps = 0usize;
    let mut rejected = 0usize;
    for seg in &path.segments {
        let rhs = |s: f64, y: &Mat2| -> Mat2 {
            let v = seg.velocity(s);
            let (aw, awb) = form.potential(seg.point(s));
            let m = aw.scale(v) + awb.scale(v.conj());
            -(m * *y)
        };
        let mut s = 0.0;
        let mut h = 0.02;
        let mut k1 = rhs(s, &psi);
        while s < 1.0 {
            if s + h > 1.0 {
                h = 1.0 - s;
            }
            let y2 = psi + lin(&[(h * A21, &k1)]);
            let k2 = rhs(s + C2 * h, &y2);
            let y3 = psi + lin(&[(h * A31, &k1), (h * A32, &k2)]);
            let k3 = rhs(s + C3 * h, &y3);
            let y4 = psi + lin(&[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]);
            let k4 = rhs(s + C4 * h, &y4);
            let y5 = psi + lin(&[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]);
            let k5 = rhs(s + C5 * h, &y5);
            let y6 = psi
                + lin(&[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)]);
            let k6 = rhs(s + h, &y6);
            let ynew = psi + lin(&[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)]);
            let k7 = rhs(s + h, &ynew);
            let err = lin(&[(h * E1, &k1), (h * E3, &k3), (h * E4, &k4), (h * E5, &k5), (h * E6, &k6), (h * E7, &k7)]);

            let scale = opts.tol * (1.0 + psi.max_abs().max(ynew.max_abs()));
            let ratio = err.max_abs() / scale;
            if !ratio.is_finite() || !ynew.is_finite() {
                return Err(AbelError::NonFinite);
            }
            if ratio <= 1.0 {
                s += h;
                psi = ynew;
                k1 = k7;
                steps += 1;
                if steps > opts.step_budget {
                    return Err(AbelError::StepLimitExceeded { budget: opts.step_budget });
                }
            } else {
                rejected += 1;
                if rejected > 10 * opts.step_budget {
                    return Err(AbelError::StepLimitExceeded { budget: opts.step_budget });
                }
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        }
    }
    let det_drift = (psi.det() - 1.0).norm();
    Ok(Transport { matrix: UnimodularMatrix::from_raw(psi), det_drift, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 1.3;

    #[test]
    fn zero_form_is_identity() {
        let t = parallel_transport(&ZeroForm, &TorusPath::gamma_x(TAU), &TransportOptions::default()).unwrap();
        assert!(t.matrix.dist(&UnimodularMatrix::identity()) < 1e-15);
    }

    #[test]
    fn diagonal_truncation_closed_forms() {
        let f = DiagonalForm { a: C64::new(0.2, 0.1), chi: C64::new(0.3, -0.4) };
        let o = TransportOptions::default();
        let x = parallel_transport(&f, &TorusPath::gamma_x(TAU), &o).unwrap().matrix;
        let e = (-(f.a + f.chi)).exp();
        assert!(x.mat().dist(&Mat2::diag(e, e.inv())) < 1e-11);
        let y = parallel_transport(&f, &TorusPath::gamma_y(TAU), &o).unwrap().matrix;
        let e = (-(f.a - f.chi) * C64::new(0.0, TAU)).exp();
        assert!(y.mat().dist(&Mat2::diag(e, e.inv())) < 1e-11);
    }

    #[test]
    fn budget_and_clearance() {
        let p = ConnectionParams::new(C64::new(0.2, 0.0), C64::new(0.3, 0.2), 0.1, 1.0);
        let form = ConnectionForm::new(&p).unwrap();
        let tight = TransportOptions { step_budget: 3, ..Default::default() };
        assert!(matches!(
            parallel_transport(&form, &TorusPath::gamma_x(1.0), &tight),
            Err(AbelError::StepLimitExceeded { .. })
        ));
        let wide = TransportOptions { clearance: Some(0.3), ..Default::default() };
        assert!(matches!(
            parallel_transport(&form, &TorusPath::gamma_x(1.0), &wide),
            Err(AbelError::PathTooCloseToPole { .. })
        ));
    }
}
