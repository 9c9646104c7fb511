use serde::Serialize;

use crate::algebra::{UnimodularMatrix, C64};
use crate::charvar::{fricke_torus_residual, TorusWeight, TraceCoords};

use super::path::TorusPath;
use super::transport::{parallel_transport, ConnectionForm, TransportOptions};
use super::{AbelError, ConnectionParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyResidual {
    /// |x² + y² + z² − xyz − 2 − 2cos 2πr|.
    pub character_equation: f64,
    /// |tr K − 2cos 2πr|.
    pub commutator_trace: f64,
    /// max |det − 1| over X and Y.
    pub det_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyResult {
    pub params: ConnectionParams,
    #[serde(rename = "X")]
    pub x_mat: UnimodularMatrix,
    #[serde(rename = "Y")]
    pub y_mat: UnimodularMatrix,
    /// Y⁻¹X⁻¹YX.
    #[serde(rename = "K")]
    pub k_mat: UnimodularMatrix,
    pub x: C64,
    pub y: C64,
    /// tr(YX).
    pub z: C64,
    pub residuals: MonodromyResidual,
    pub steps: usize,
}

impl MonodromyResult {
    pub fn traces(&self) -> TraceCoords {
        TraceCoords::new(self.x, self.y, self.z)
    }

    pub fn passes(&self, tol_mono: f64, tol_det: f64) -> bool {
        let r = &self.residuals;
        r.character_equation <= tol_mono && r.commutator_trace <= tol_mono && r.det_drift <= tol_det
    }
}

pub fn monodromies(p: &ConnectionParams) -> Result<MonodromyResult, AbelError> {
    monodromies_with(p, &TransportOptions::default())
}

/// X, Y by transport along γ_x, γ_y from p₀.
pub fn monodromies_with(p: &ConnectionParams, opts: &TransportOptions) -> Result<MonodromyResult, AbelError> {
    let form = ConnectionForm::new(p)?;
    let tx = parallel_transport(&form, &TorusPath::gamma_x(p.tau), opts)?;
    let ty = parallel_transport(&form, &TorusPath::gamma_y(p.tau), opts)?;
    let (xm, ym) = (tx.matrix, ty.matrix);
    let k = ym.inverse() * xm.inverse() * ym * xm;
    let t = TraceCoords::of_pair(&xm, &ym);
    let residuals = MonodromyResidual {
        character_equation: fricke_torus_residual(&t, p.r).norm(),
        commutator_trace: (k.trace() - p.r.c()).norm(),
        det_drift: tx.det_drift.max(ty.det_drift),
    };
    Ok(MonodromyResult {
        params: *p,
        x_mat: xm,
        y_mat: ym,
        k_mat: k,
        x: t.x,
        y: t.y,
        z: t.z,
        residuals,
        steps: tx.steps + ty.steps,
    })
}

/// Largest change in X or Y when γ_x, γ_y are replaced by wiggly homotopic
/// loops with the same basepoint.
pub fn homotopy_deviation(p: &ConnectionParams, opts: &TransportOptions) -> Result<f64, AbelError> {
    let form = ConnectionForm::new(p)?;
    let tau = p.tau;
    let straight_x = parallel_transport(&form, &TorusPath::gamma_x(tau), opts)?.matrix;
    let straight_y = parallel_transport(&form, &TorusPath::gamma_y(tau), opts)?.matrix;
    let wx = parallel_transport(&form, &TorusPath::wiggly_x(tau, 0.125, 1), opts)?.matrix;
    let wy = parallel_transport(&form, &TorusPath::wiggly_y(tau, 0.125, 2), opts)?.matrix;
    Ok(wx.dist(&straight_x).max(wy.dist(&straight_y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reference_point_residuals() {
        let p = ConnectionParams::new(C64::new(0.2, 0.0), C64::new(0.3, 0.2), 0.1, 1.0);
        let m = monodromies(&p).unwrap();
        assert!(m.residuals.commutator_trace <= 1e-6, "{:?}", m.residuals);
        assert!(m.residuals.character_equation <= 1e-6, "{:?}", m.residuals);
        assert!(m.residuals.det_drift <= 1e-8, "{:?}", m.residuals);
        assert!((m.k_mat.trace().re - 2.0 * (PI / 5.0).cos()).abs() < 1e-6);
    }

    #[test]
    fn reversal_inverts() {
        let p = ConnectionParams::new(C64::new(0.1, 0.05), C64::new(0.25, -0.1), 0.1, 1.2);
        let form = ConnectionForm::new(&p).unwrap();
        let o = TransportOptions::default();
        let g = TorusPath::gamma_x(p.tau);
        let fwd = parallel_transport(&form, &g, &o).unwrap().matrix;
        let back = parallel_transport(&form, &g.reversed(), &o).unwrap().matrix;
        assert!((back * fwd).dist(&UnimodularMatrix::identity()) < 1e-9);
    }

    #[test]
    fn concatenation_composes_right_to_left() {
        let p = ConnectionParams::new(C64::new(0.1, 0.05), C64::new(0.25, -0.1), 0.1, 1.2);
        let form = ConnectionForm::new(&p).unwrap();
        let o = TransportOptions::default();
        let gx = TorusPath::gamma_x(p.tau);
        let gy = TorusPath::gamma_y(p.tau);
        // γ_x then (the translate of) γ_y; the form is periodic so the
        // translate has the same transport as γ_y.
        let shifted = TorusPath {
            tau: p.tau,
            segments: gy.segments.iter().map(|s| match *s {
                super::super::Segment::Line { from, to } => super::super::Segment::Line { from: from + 1.0, to: to + 1.0 },
                other => other,
            }).collect(),
        };
        let both = parallel_transport(&form, &gx.then(&shifted), &o).unwrap().matrix;
        let x = parallel_transport(&form, &gx, &o).unwrap().matrix;
        let y = parallel_transport(&form, &gy, &o).unwrap().matrix;
        assert!(both.dist(&(y * x)) < 1e-9);
    }
}
