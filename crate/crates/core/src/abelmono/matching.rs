use serde::Serialize;

use crate::algebra::C64;
use crate::tolerances::TOL_ROOT;

use super::locus::admissible_slice;
use super::monodromy::{monodromies_with, MonodromyResult};
use super::transport::TransportOptions;
use super::{AbelError, ConnectionParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchOptions {
    pub transport: TransportOptions,
    pub tol_root: f64,
    pub max_evaluations: usize,
    /// Bisection stops once the bracket shrinks below this fraction of its
    /// initial width; secant steps take over.
    pub bisection_fraction: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            transport: TransportOptions::default(),
            tol_root: TOL_ROOT,
            max_evaluations: 60,
            bisection_fraction: 1.0 / 64.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchResult {
    /// Slice parameter; a = offset + direction·t.
    pub t: f64,
    pub a: C64,
    pub residual: f64,
    pub evaluations: usize,
    pub monodromy: MonodromyResult,
}

/// a on the η-admissible line through χ₀ with Re tr Y = y_target.
pub fn match_y(
    y_target: f64,
    r: f64,
    tau: f64,
    chi0: C64,
    bracket: (f64, f64),
    opts: &MatchOptions,
) -> Result<MatchResult, AbelError> {
    let line = admissible_slice(chi0, tau)?;
    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Result<(f64, MonodromyResult), AbelError> {
        if evaluations >= opts.max_evaluations {
            return Err(AbelError::MaxIterations(evaluations));
        }
        evaluations += 1;
        let m = monodromies_with(&ConnectionParams::new(line.at(t), chi0, r, tau), &opts.transport)?;
        Ok((m.y.re - y_target, m))
    };
    let done = |t: f64, f: f64, m: MonodromyResult, n: usize| MatchResult {
        t,
        a: line.at(t),
        residual: f.abs(),
        evaluations: n,
        monodromy: m,
    };

    let (mut lo, mut hi) = bracket;
    let (mut f_lo, m_lo) = eval(lo)?;
    if f_lo.abs() <= opts.tol_root {
        return Ok(done(lo, f_lo, m_lo, 1));
    }
    let (mut f_hi, m_hi) = eval(hi)?;
    if f_hi.abs() <= opts.tol_root {
        return Ok(done(hi, f_hi, m_hi, 2));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(AbelError::BracketDoesNotStraddle { f_lo, f_hi });
    }

    let width0 = (hi - lo).abs();
    while (hi - lo).abs() > opts.bisection_fraction * width0 {
        let mid = 0.5 * (lo + hi);
        let (f, m) = eval(mid)?;
        if f.abs() <= opts.tol_root {
            return Ok(done(mid, f, m, evaluations));
        }
        if (f > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
            f_hi = f;
        }
    }

    // Secant from the bracket ends, falling back to bisection if a step
    // leaves the bracket.
    let (mut t0, mut f0, mut t1, mut f1) = (lo, f_lo, hi, f_hi);
    loop {
        let mut t = t1 - f1 * (t1 - t0) / (f1 - f0);
        if !t.is_finite() || t <= lo.min(hi) || t >= lo.max(hi) {
            t = 0.5 * (lo + hi);
        }
        let (f, m) = eval(t)?;
        if f.abs() <= opts.tol_root {
            return Ok(done(t, f, m, evaluations));
        }
        if (f > 0.0) == (f_lo > 0.0) {
            lo = t;
            f_lo = f;
        } else {
            hi = t;
        }
        t0 = t1;
        f0 = f1;
        t1 = t;
        f1 = f;
    }
}
