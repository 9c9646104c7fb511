//! Piecewise-smooth loops on the punctured torus C/(Z + iτZ).

use std::f64::consts::PI;

use crate::algebra::C64;

use super::AbelError;

/// One piece of a path, parametrized by s ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// from + s(to − from) + amplitude·sin(2π·periods·s).
    Sine { from: C64, to: C64, amplitude: C64, periods: u32 },
}

impl Segment {
    pub fn point(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Sine { from, to, amplitude, periods } => {
                from + (to - from) * s + amplitude * (2.0 * PI * periods as f64 * s).sin()
            }
        }
    }

    pub fn velocity(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Sine { from, to, amplitude, periods } => {
                let k = 2.0 * PI * periods as f64;
                (to - from) + amplitude * (k * (k * s).cos())
            }
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Sine { from, to, amplitude, periods } => {
                Segment::Sine { from: to, to: from, amplitude: -amplitude, periods }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusPath {
    pub tau: f64,
    /// Traversed in order.
    pub segments: Vec<Segment>,
}

/// p₀ = (1 + iτ)/4.
pub fn basepoint(tau: f64) -> C64 {
    C64::new(0.25, 0.25 * tau)
}

/// 0.05·min(1, τ).
pub fn default_clearance(tau: f64) -> f64 {
    0.05 * tau.min(1.0)
}

impl TorusPath {
    /// p₀ + s.
    pub fn gamma_x(tau: f64) -> Self {
        let p0 = basepoint(tau);
        Self { tau, segments: vec![Segment::Line { from: p0, to: p0 + 1.0 }] }
    }

    /// p₀ + iτs.
    pub fn gamma_y(tau: f64) -> Self {
        let p0 = basepoint(tau);
        Self { tau, segments: vec![Segment::Line { from: p0, to: p0 + C64::new(0.0, tau) }] }
    }

    /// γ_x with a vertical wiggle of the given fraction of τ.
    pub fn wiggly_x(tau: f64, fraction: f64, periods: u32) -> Self {
        let p0 = basepoint(tau);
        Self {
            tau,
            segments: vec![Segment::Sine {
                from: p0,
                to: p0 + 1.0,
                amplitude: C64::new(0.0, fraction * tau),
                periods,
            }],
        }
    }

    /// γ_y with a horizontal wiggle of the given amplitude.
    pub fn wiggly_y(tau: f64, amplitude: f64, periods: u32) -> Self {
        let p0 = basepoint(tau);
        Self {
            tau,
            segments: vec![Segment::Sine {
                from: p0,
                to: p0 + C64::new(0.0, tau),
                amplitude: C64::new(amplitude, 0.0),
                periods,
            }],
        }
    }

    pub fn reversed(&self) -> Self {
        Self { tau: self.tau, segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TorusPath) -> Self {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&next.segments);
        Self { tau: self.tau, segments }
    }

    pub fn start(&self) -> Option<C64> {
        self.segments.first().map(|s| s.point(0.0))
    }

    pub fn end(&self) -> Option<C64> {
        self.segments.last().map(|s| s.point(1.0))
    }

    /// Distance from w to the nearest point of Z + iτZ.
    pub fn lattice_distance(&self, w: C64) -> f64 {
        let m = w.re.round();
        let n = (w.im / self.tau).round();
        (w - C64::new(m, n * self.tau)).norm()
    }

    /// Smallest sampled distance to the lattice.
    pub fn clearance(&self, samples_per_segment: usize) -> f64 {
        let mut best = f64::INFINITY;
        for seg in &self.segments {
            for i in 0..=samples_per_segment {
                let s = i as f64 / samples_per_segment as f64;
                best = best.min(self.lattice_distance(seg.point(s)));
            }
        }
        best
    }

    pub fn check_clearance(&self, delta: f64) -> Result<(), AbelError> {
        let d = self.clearance(512);
        if d < delta {
            return Err(AbelError::PathTooCloseToPole { distance: d, required: delta });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_reversal() {
        let p = TorusPath::wiggly_x(1.5, 0.125, 2);
        let r = p.reversed();
        assert!((p.start().unwrap() - r.end().unwrap()).norm() < 1e-15);
        assert!((p.end().unwrap() - r.start().unwrap()).norm() < 1e-12);
        for s in [0.0, 0.13, 0.5, 0.77] {
            let a = p.segments[0].point(s);
            let b = r.segments[0].point(1.0 - s);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn velocity_matches_difference_quotient() {
        let seg = TorusPath::wiggly_y(0.8, 0.1, 3).segments[0];
        let h = 1e-6;
        for s in [0.1, 0.4, 0.9] {
            let fd = (seg.point(s + h) - seg.point(s - h)) / (2.0 * h);
            assert!((fd - seg.velocity(s)).norm() < 1e-6);
        }
    }

    #[test]
    fn clearance() {
        let tau = 1.0;
        assert!((TorusPath::gamma_x(tau).clearance(512) - 0.25).abs() < 1e-12);
        assert!(TorusPath::wiggly_x(tau, 0.125, 1).check_clearance(default_clearance(tau)).is_ok());
        let bad = TorusPath { tau, segments: vec![Segment::Line { from: C64::new(0.01, 0.01), to: C64::new(0.5, 0.5) }] };
        assert!(matches!(bad.check_clearance(0.05), Err(AbelError::PathTooCloseToPole { .. })));
    }
}
