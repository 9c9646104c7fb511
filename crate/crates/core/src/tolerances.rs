//! Default tolerance ladder.

use serde::Serialize;

/// Exact-algebra identities (traces of words, products, orders).
pub const TOL_ALG: f64 = 1e-9;
/// Character-variety membership.
pub const TOL_CHAR: f64 = 1e-8;
/// Monodromy identities computed from ODE transport.
pub const TOL_MONO: f64 = 1e-6;
/// Root-finding target accuracy.
pub const TOL_ROOT: f64 = 1e-6;
/// Accepted-step budget per transport.
pub const STEP_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol_alg: f64,
    pub tol_char: f64,
    pub tol_mono: f64,
    pub tol_root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_alg: TOL_ALG,
            tol_char: TOL_CHAR,
            tol_mono: TOL_MONO,
            tol_root: TOL_ROOT,
        }
    }
}
