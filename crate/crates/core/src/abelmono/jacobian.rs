use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::C64;
use crate::tolerances::TOL_MONO;

use super::monodromy::monodromies_with;
use super::transport::TransportOptions;
use super::{AbelError, ConnectionParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianOptions {
    pub transport: TransportOptions,
    pub h: f64,
    pub tol_mono: f64,
}

impl Default for JacobianOptions {
    fn default() -> Self {
        Self { transport: TransportOptions::default(), h: 1e-4, tol_mono: TOL_MONO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianReport {
    pub a: f64,
    pub tau: f64,
    pub r: f64,
    pub h: f64,
    /// Rows (x, y), columns (a, τ).
    pub jacobian: [[f64; 2]; 2],
    pub jacobian_half_step: [[f64; 2]; 2],
    /// Descending.
    pub singular_values: [f64; 2],
    pub rank: u8,
    /// ‖J_h − J_{h/2}‖_F / ‖J_h‖_F.
    pub relative_change: f64,
}

impl JacobianReport {
    pub fn stable(&self) -> bool {
        self.relative_change < 0.05
    }
}

fn singular_values(j: &[[f64; 2]; 2]) -> [f64; 2] {
    let [[a, b], [c, d]] = *j;
    let s = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
    let s1 = (0.5 * (s + disc)).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    [s1, s2]
}

/// Central-difference Jacobian of (a, τ) ↦ (x, y) on the slice χ₀ = π/(4τ).
pub fn jacobian_rank(a: f64, tau: f64, r: f64, opts: &JacobianOptions) -> Result<JacobianReport, AbelError> {
    let a0 = -PI / (4.0 * tau);
    if (a - a0).abs() < 0.05 {
        return Err(AbelError::NearReduciblePoint { a, a0 });
    }
    let h = opts.h;
    let f = |aa: f64, tt: f64| -> Result<[f64; 2], AbelError> {
        let p = ConnectionParams::new(C64::new(aa, 0.0), C64::new(PI / (4.0 * tt), 0.0), r, tt);
        let m = monodromies_with(&p, &opts.transport)?;
        Ok([m.x.re, m.y.re])
    };
    let offsets = [
        (h, 0.0),
        (-h, 0.0),
        (0.0, h),
        (0.0, -h),
        (h / 2.0, 0.0),
        (-h / 2.0, 0.0),
        (0.0, h / 2.0),
        (0.0, -h / 2.0),
    ];
    let vals: Vec<[f64; 2]> = offsets.par_iter().map(|&(da, dt)| f(a + da, tau + dt)).collect::<Result<_, _>>()?;
    let build = |base: usize, step: f64| {
        let mut j = [[0.0; 2]; 2];
        for row in 0..2 {
            j[row][0] = (vals[base][row] - vals[base + 1][row]) / (2.0 * step);
            j[row][1] = (vals[base + 2][row] - vals[base + 3][row]) / (2.0 * step);
        }
        j
    };
    let jacobian = build(0, h);
    let jacobian_half_step = build(4, h / 2.0);
    let frob = |m: &[[f64; 2]; 2]| m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let mut diff = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            diff[i][k] = jacobian[i][k] - jacobian_half_step[i][k];
        }
    }
    let relative_change = frob(&diff) / frob(&jacobian);
    let sv = singular_values(&jacobian);
    let threshold = 1e3 * opts.tol_mono;
    let rank = sv.iter().filter(|&&s| s > threshold).count() as u8;
    Ok(JacobianReport {
        a,
        tau,
        r,
        h,
        jacobian,
        jacobian_half_step,
        singular_values: sv,
        rank,
        relative_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_closed_form() {
        let s = singular_values(&[[3.0, 0.0], [0.0, -2.0]]);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
        let s = singular_values(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(s[1].abs() < 1e-12 && (s[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_reducible_neighbourhood() {
        let a0 = -PI / 4.0;
        assert!(matches!(
            jacobian_rank(a0 + 0.01, 1.0, 0.1, &JacobianOptions::default()),
            Err(AbelError::NearReduciblePoint { .. })
        ));
    }
}
