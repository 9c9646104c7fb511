use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::C64;
use crate::charvar::{eta_locus_residual, eta_locus_y};
use crate::tolerances::TOL_MONO;

use super::monodromy::{monodromies_with, MonodromyResult};
use super::transport::TransportOptions;
use super::{AbelError, ConnectionParams};

/// The two bundle types: χ₀ = π/(4τ) with real a, or χ₀ = iπ/4 with
/// imaginary a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiChoice {
    Real,
    Imaginary,
}

impl ChiChoice {
    pub fn chi0(&self, tau: f64) -> C64 {
        match self {
            ChiChoice::Real => C64::new(PI / (4.0 * tau), 0.0),
            ChiChoice::Imaginary => C64::new(0.0, PI / 4.0),
        }
    }
}

/// a(t) = offset + direction·t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceLine {
    pub offset: C64,
    pub direction: C64,
}

impl SliceLine {
    pub fn at(&self, t: f64) -> C64 {
        self.offset + self.direction * t
    }
}

/// The line of a-values keeping (a, χ₀) η-invariant.
pub fn admissible_slice(chi0: C64, tau: f64) -> Result<SliceLine, AbelError> {
    const TOL: f64 = 1e-12;
    let k = (-chi0.im / (PI / 2.0)).round();
    if (chi0.im + k * PI / 2.0).abs() <= TOL {
        return Ok(SliceLine { offset: C64::new(0.0, -chi0.im), direction: C64::new(1.0, 0.0) });
    }
    let unit = PI / (2.0 * tau);
    let k = (-chi0.re / unit).round();
    if (chi0.re + k * unit).abs() <= TOL {
        return Ok(SliceLine { offset: C64::new(-chi0.re, 0.0), direction: C64::new(0.0, 1.0) });
    }
    Err(AbelError::NotAdmissible(chi0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub transport: TransportOptions,
    pub tol_mono: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { transport: TransportOptions::default(), tol_mono: TOL_MONO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocusRow {
    pub t: f64,
    pub a: C64,
    pub x: C64,
    pub y: C64,
    pub z: C64,
    pub eta_residual: f64,
    pub real: bool,
    /// Inserted by root refinement rather than on the sample grid.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusTable {
    pub r: f64,
    pub tau: f64,
    pub chi0: C64,
    pub rows: Vec<LocusRow>,
    /// (x, y) on y² = (4x² − 8(1 + cos 2πr))/(x² − 4), x > 2.
    pub overlay: Vec<[f64; 2]>,
}

impl LocusTable {
    pub fn real_rows(&self) -> impl Iterator<Item = &LocusRow> {
        self.rows.iter().filter(|r| r.real)
    }
}

/// Samples of the analytic locus for 2 < x ≤ x_max.
pub fn analytic_overlay(r: f64, x_max: f64, n: usize) -> Vec<[f64; 2]> {
    let lo = 2.0f64;
    (0..n)
        .filter_map(|i| {
            // Cluster samples near the asymptote x = 2.
            let u = (i as f64 + 1.0) / n as f64;
            let x = lo + (x_max - lo) * u * u;
            eta_locus_y(x, r).map(|y| [x, y])
        })
        .collect()
}

fn row(t: f64, m: &MonodromyResult, r: f64, tol: f64, refined: bool) -> LocusRow {
    let real = m.x.im.abs() <= tol && m.y.im.abs() <= tol && m.z.im.abs() <= tol;
    LocusRow {
        t,
        a: m.params.a,
        x: m.x,
        y: m.y,
        z: m.z,
        eta_residual: eta_locus_residual(m.x.re, m.y.re, r),
        real,
        refined,
    }
}

/// Zero of Im z between two samples, by bracketed secant (Illinois).
fn refine_real_point(
    eval: &(dyn Fn(f64) -> Result<MonodromyResult, AbelError> + Sync),
    (mut t0, mut f0): (f64, f64),
    (mut t1, mut f1): (f64, f64),
    tol: f64,
) -> Result<(f64, MonodromyResult), AbelError> {
    let mut best: Option<(f64, MonodromyResult)> = None;
    let mut side = 0i8;
    for _ in 0..60 {
        let t = (t0 * f1 - t1 * f0) / (f1 - f0);
        let t = if t.is_finite() && t > t0.min(t1) && t < t0.max(t1) { t } else { 0.5 * (t0 + t1) };
        let m = eval(t)?;
        let f = m.z.im;
        best = Some((t, m));
        if f.abs() <= tol || (t1 - t0).abs() < 1e-14 {
            break;
        }
        if (f > 0.0) == (f0 > 0.0) {
            t0 = t;
            f0 = f;
            if side == -1 {
                f1 *= 0.5;
            }
            side = -1;
        } else {
            t1 = t;
            f1 = f;
            if side == 1 {
                f0 *= 0.5;
            }
            side = 1;
        }
    }
    best.ok_or(AbelError::MaxIterations(0))
}

/// Traces along the η-admissible line through χ₀ for t ∈ a_range, with
/// real points (Im z = 0) located between samples and flagged.
pub fn real_locus_sweep(
    r: f64,
    tau: f64,
    chi0: C64,
    a_range: (f64, f64),
    n: usize,
    opts: &SweepOptions,
) -> Result<LocusTable, AbelError> {
    let line = admissible_slice(chi0, tau)?;
    let n = n.max(2);
    let (lo, hi) = a_range;
    let eval = |t: f64| monodromies_with(&ConnectionParams::new(line.at(t), chi0, r, tau), &opts.transport);
    let ts: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let samples: Vec<MonodromyResult> = ts.par_iter().map(|&t| eval(t)).collect::<Result<_, _>>()?;

    let brackets: Vec<usize> = (0..n - 1)
        .filter(|&i| {
            let (a, b) = (samples[i].z.im, samples[i + 1].z.im);
            a.abs() > opts.tol_mono && b.abs() > opts.tol_mono && (a > 0.0) != (b > 0.0)
        })
        .collect();
    let refine_tol = 1e-3 * opts.tol_mono;
    let refined: Vec<(f64, MonodromyResult)> = brackets
        .par_iter()
        .map(|&i| refine_real_point(&eval, (ts[i], samples[i].z.im), (ts[i + 1], samples[i + 1].z.im), refine_tol))
        .collect::<Result<_, _>>()?;

    let mut rows: Vec<LocusRow> = ts.iter().zip(&samples).map(|(&t, m)| row(t, m, r, opts.tol_mono, false)).collect();
    rows.extend(refined.iter().map(|(t, m)| row(*t, m, r, opts.tol_mono, true)));
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));

    Ok(LocusTable { r, tau, chi0, rows, overlay: analytic_overlay(r, 8.0, 400) })
}

/// One sweep per τ on the chosen slice.
pub fn locus_scan(
    r: f64,
    choice: ChiChoice,
    taus: &[f64],
    a_range: (f64, f64),
    n: usize,
    opts: &SweepOptions,
) -> Result<Vec<LocusTable>, AbelError> {
    taus.par_iter().map(|&tau| real_locus_sweep(r, tau, choice.chi0(tau), a_range, n, opts)).collect()
}
