//! Weierstrass σ for the rectangular lattice Z + iτZ via Jacobi θ₁ series.

use std::f64::consts::PI;

use crate::algebra::C64;

use super::AbelError;

/// Nome series data for q = e^{−πt}.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Nome {
    q: f64,
    /// θ₁'(0).
    d1: f64,
    /// η₁ for the lattice Z + itZ.
    eta1: f64,
}

impl Nome {
    fn new(t: f64) -> Self {
        let q = (-PI * t).exp();
        let (mut d1, mut d3) = (0.0, 0.0);
        for n in 0..64 {
            let h = n as f64 + 0.5;
            let c = q.powf(h * h);
            let k = 2.0 * h;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            d1 += sgn * c * k;
            d3 -= sgn * c * k * k * k;
            if c * k * k * k < 1e-18 * d1.abs() {
                break;
            }
        }
        d1 *= 2.0;
        d3 *= 2.0;
        Self { q, d1, eta1: -PI * PI * d3 / (3.0 * d1) }
    }

    /// θ₁(z) = 2 Σ (−1)ⁿ q^{(n+½)²} sin((2n+1)z).
    fn theta1(&self, z: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        let grow = z.im.abs();
        for n in 0..64 {
            let h = n as f64 + 0.5;
            let c = self.q.powf(h * h);
            let term = (z * (2.0 * h)).sin() * c;
            s += if n % 2 == 0 { term } else { -term };
            if c * (2.0 * h * grow).exp() < 1e-18 * s.norm() {
                break;
            }
        }
        s * 2.0
    }

    /// σ for Z + itZ at a point of the centred fundamental cell.
    fn sigma_reduced(&self, u: C64) -> C64 {
        (u * u * (self.eta1 / 2.0)).exp() * self.theta1(u * PI) / (PI * self.d1)
    }
}

/// The lattice Λ = Z + iτZ with its quasi-periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    tau: f64,
    eta1: C64,
    eta2: C64,
    /// Series used for evaluation; for τ < 1 the swapped lattice Z + (i/τ)Z,
    /// related by σ_Λ(w) = iτ σ(w/(iτ)).
    frame: Nome,
    swapped: bool,
    legendre_residual: f64,
}

impl Lattice {
    pub fn new(tau: f64) -> Result<Self, AbelError> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(AbelError::InvalidParams(format!("tau = {tau} must be positive")));
        }
        let direct = Nome::new(tau);
        let dual = Nome::new(1.0 / tau);
        let eta1 = C64::new(direct.eta1, 0.0);
        let eta2 = C64::new(0.0, -dual.eta1 / tau);
        let omega2 = C64::new(0.0, tau);
        let legendre_residual = (eta1 * omega2 - eta2 - C64::new(0.0, 2.0 * PI)).norm();
        if legendre_residual > 1e-10 {
            return Err(AbelError::Legendre(legendre_residual));
        }
        let swapped = tau < 1.0;
        let frame = if swapped { dual } else { direct };
        Ok(Self { tau, eta1, eta2, frame, swapped, legendre_residual })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn eta1(&self) -> C64 {
        self.eta1
    }

    pub fn eta2(&self) -> C64 {
        self.eta2
    }

    /// |η₁ω₂ − η₂ω₁ − 2πi| at construction.
    pub fn legendre_residual(&self) -> f64 {
        self.legendre_residual
    }

    /// Nearest lattice point as (m, n) with w ≈ m + n·iτ.
    pub fn nearest(&self, w: C64) -> (i64, i64) {
        (w.re.round() as i64, (w.im / self.tau).round() as i64)
    }

    pub fn distance(&self, w: C64) -> f64 {
        let (m, n) = self.nearest(w);
        (w - C64::new(m as f64, n as f64 * self.tau)).norm()
    }

    /// η(ω) for ω = m + n·iτ.
    pub fn eta(&self, m: i64, n: i64) -> C64 {
        self.eta1 * m as f64 + self.eta2 * n as f64
    }

    pub fn sigma(&self, w: C64) -> C64 {
        let (m, n) = self.nearest(w);
        let omega = C64::new(m as f64, n as f64 * self.tau);
        let w0 = w - omega;
        let base = if self.swapped {
            let s = C64::new(0.0, self.tau);
            s * self.frame.sigma_reduced(w0 / s)
        } else {
            self.frame.sigma_reduced(w0)
        };
        if m == 0 && n == 0 {
            return base;
        }
        let sign = if (m + n + m * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (self.eta(m, n) * (w0 + omega * 0.5)).exp() * base * sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_eta() {
        let l = Lattice::new(1.0).unwrap();
        assert!((l.eta1().re - PI).abs() < 1e-12);
        assert!((l.eta2() - C64::new(0.0, -PI)).norm() < 1e-12);
    }

    #[test]
    fn legendre_across_tau() {
        for tau in [0.2, 0.5, 0.8, 1.0, 1.25, 2.0, 3.7, 5.0] {
            assert!(Lattice::new(tau).unwrap().legendre_residual() < 1e-10, "tau {tau}");
        }
        assert!(Lattice::new(0.0).is_err());
    }

    #[test]
    fn normalization_and_oddness() {
        for tau in [0.5, 1.0, 2.5] {
            let l = Lattice::new(tau).unwrap();
            let w = C64::new(1e-4, 0.0);
            assert!((l.sigma(w) / w - 1.0).norm() < 1e-7);
            let w = C64::new(0.31, -0.17 * tau);
            assert!((l.sigma(-w) + l.sigma(w)).norm() < 1e-14 * l.sigma(w).norm().max(1.0));
        }
    }

    #[test]
    fn quasi_periodicity() {
        for tau in [0.4, 1.0, 1.7] {
            let l = Lattice::new(tau).unwrap();
            for w in [C64::new(0.3, 0.2), C64::new(-0.41, 0.33 * tau), C64::new(0.05, -0.4 * tau)] {
                for (omega, eta) in [(C64::new(1.0, 0.0), l.eta1()), (C64::new(0.0, tau), l.eta2())] {
                    let lhs = l.sigma(w + omega);
                    let rhs = -(eta * (w + omega * 0.5)).exp() * l.sigma(w);
                    assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "tau {tau} w {w}");
                }
            }
        }
    }

    #[test]
    fn frames_agree_near_one() {
        // Just below and above τ = 1 the two evaluation frames must match.
        let a = Lattice::new(1.0 - 1e-9).unwrap();
        let b = Lattice::new(1.0).unwrap();
        let w = C64::new(0.21, 0.37);
        assert!((a.sigma(w) - b.sigma(w)).norm() < 1e-7);
    }
}
