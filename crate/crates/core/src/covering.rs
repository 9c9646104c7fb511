//! Reducible Fuchsian systems on the four-punctured sphere and their
//! trivialization on the cyclic covering y^{g+1} = (z−p₁)(z−p₂)/((z−p₃)(z−p₄)).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{evaluate_word, GroupWord, Letter, Mat2, UnimodularMatrix, C64};
use crate::charvar::{genus_of_weight, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    #[error("signs must contain exactly one +1 among sigma2, sigma3, sigma4")]
    InvalidSigns,
    #[error("malformed sign list '{0}'")]
    MalformedSigns(String),
    #[error("angle {0} outside (0, pi/2)")]
    BadAngle(f64),
    #[error("sheet count {0} must be at least 2")]
    BadSheetCount(i64),
    #[error("evaluation at puncture p{0}")]
    EvaluationAtPuncture(usize),
}

/// (σ₂, σ₃, σ₄) with 1 + σ₂ + σ₃ + σ₄ = 0; σ₁ = +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignChoice {
    s: [i8; 3],
}

impl SignChoice {
    pub fn new(s2: i8, s3: i8, s4: i8) -> Result<Self, CoveringError> {
        let s = [s2, s3, s4];
        if s.iter().any(|v| v.abs() != 1) || 1 + s2 + s3 + s4 != 0 {
            return Err(CoveringError::InvalidSigns);
        }
        Ok(Self { s })
    }

    /// (σ₁, σ₂, σ₃, σ₄).
    pub fn sigma(&self) -> [i8; 4] {
        [1, self.s[0], self.s[1], self.s[2]]
    }

    /// The puncture indices with σ = +1, then those with σ = −1.
    pub fn pairing(&self) -> ([usize; 2], [usize; 2]) {
        let sig = self.sigma();
        let plus: Vec<usize> = (0..4).filter(|&j| sig[j] > 0).collect();
        let minus: Vec<usize> = (0..4).filter(|&j| sig[j] < 0).collect();
        ([plus[0], plus[1]], [minus[0], minus[1]])
    }
}

impl Default for SignChoice {
    fn default() -> Self {
        Self { s: [1, -1, -1] }
    }
}

impl FromStr for SignChoice {
    type Err = CoveringError;
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || CoveringError::MalformedSigns(text.to_string());
        let parts: Vec<i8> = text
            .split(',')
            .map(|p| p.trim().parse::<i8>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a, b, c] => Self::new(*a, *b, *c),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+},{:+},{:+}", self.s[0], self.s[1], self.s[2])
    }
}

/// p₁ = e^{iφ}, p₂ = −e^{−iφ}, p₃ = −e^{iφ}, p₄ = e^{−iφ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PuncturePoints {
    phi: f64,
}

impl PuncturePoints {
    pub fn new(phi: f64) -> Result<Self, CoveringError> {
        if !(phi > 0.0 && phi < PI / 2.0) {
            return Err(CoveringError::BadAngle(phi));
        }
        Ok(Self { phi })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn points(&self) -> [C64; 4] {
        let e = C64::from_polar(1.0, self.phi);
        [e, -e.conj(), -e, e.conj()]
    }
}

/// Weight, sheet count n = g + 1, and the character γⱼ ↦ σⱼ mod n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringSpec {
    pub sheets: i64,
    pub character: [i64; 4],
}

impl CoveringSpec {
    pub fn new(w: &Weight, s: SignChoice) -> Self {
        let sheets = genus_of_weight(w) + 1;
        let character = s.sigma().map(|v| (v as i64).rem_euclid(sheets));
        Self { sheets, character }
    }

    /// The character kills γ₄γ₃γ₂γ₁.
    pub fn is_consistent(&self) -> bool {
        self.character.iter().sum::<i64>().rem_euclid(self.sheets) == 0
    }
}

/// Mⱼ = diag(e^{−2πi r̃ σⱼ}, e^{2πi r̃ σⱼ}) for an arbitrary real r̃.
pub fn local_monodromies_at(rt: f64, s: SignChoice) -> [UnimodularMatrix; 4] {
    s.sigma().map(|sig| {
        let e = C64::from_polar(1.0, -2.0 * PI * rt * sig as f64);
        UnimodularMatrix::normalize(Mat2::diag(e, e.conj())).expect("unit diagonal")
    })
}

pub fn fuchsian_local_monodromies(w: &Weight, s: SignChoice) -> [UnimodularMatrix; 4] {
    local_monodromies_at(w.sphere_weight(), s)
}

/// Reidemeister–Schreier generators over the alphabet (γ₁, γ₂, γ₃) for the
/// kernel of γ₁ ↦ 1, γ₂ ↦ σ₂, γ₃ ↦ σ₃ in Z_n, with transversal {γ₁ⁱ}.
pub fn kernel_generators_for(n: i64, s: SignChoice) -> Result<Vec<GroupWord>, CoveringError> {
    if n < 2 {
        return Err(CoveringError::BadSheetCount(n));
    }
    let sig = s.sigma();
    let rep = |i: i64| GroupWord::from_powers(&[(0, i.rem_euclid(n))]);
    let mut out = vec![GroupWord::from_powers(&[(0, n)])];
    for g in 1..3 {
        for i in 0..n {
            let letter = GroupWord::from_letters(vec![Letter { generator: g, exponent: 1 }]);
            let w = rep(i).concat(&letter).concat(&rep(i + sig[g] as i64).inverse());
            out.push(w.reduced());
        }
    }
    Ok(out)
}

/// Kernel generators for the default character γ₁, γ₂ ↦ +1, γ₃ ↦ −1.
pub fn kernel_generators(n: i64) -> Result<Vec<GroupWord>, CoveringError> {
    kernel_generators_for(n, SignChoice::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringReport {
    pub sheets: i64,
    pub generator_count: usize,
    /// ±1 for each generator whose value is ±Id, 0 otherwise.
    pub signs: Vec<i8>,
    pub max_defect: f64,
    pub all_central: bool,
    pub sign_coherent: bool,
    pub all_plus: bool,
    pub passed: bool,
}

/// Checks at an arbitrary real weight r̃ with `n` sheets; `expect_plus`
/// additionally requires every sign to be +1.
pub fn covering_check_at(rt: f64, n: i64, s: SignChoice, expect_plus: bool, tol: f64) -> CoveringReport {
    let alphabet = local_monodromies_at(rt, s);
    let gens = kernel_generators_for(n, s).unwrap_or_default();
    let id = UnimodularMatrix::identity();
    let mut signs = Vec::with_capacity(gens.len());
    let mut max_defect: f64 = 0.0;
    for g in &gens {
        let v = evaluate_word(g, &alphabet).expect("alphabet has three letters");
        let (dp, dm) = (v.dist(&id), v.dist(&-id));
        max_defect = max_defect.max(dp.min(dm));
        signs.push(if dp <= tol { 1 } else if dm <= tol { -1 } else { 0 });
    }
    let all_central = !gens.is_empty() && signs.iter().all(|&s| s != 0);

    let mut sign_coherent = all_central;
    if all_central {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let len = rng.random_range(1..=6);
            let mut word = GroupWord::empty();
            let mut expected: i8 = 1;
            for _ in 0..len {
                let k = rng.random_range(0..gens.len());
                let g = if rng.random_bool(0.5) { gens[k].clone() } else { gens[k].inverse() };
                word = word.concat(&g);
                expected *= signs[k];
            }
            let v = evaluate_word(&word, &alphabet).expect("alphabet has three letters");
            let target = if expected > 0 { id } else { -id };
            if v.dist(&target) > tol {
                sign_coherent = false;
                break;
            }
        }
    }
    let all_plus = all_central && signs.iter().all(|&s| s == 1);
    let passed = all_central && sign_coherent && (!expect_plus || all_plus);
    CoveringReport {
        sheets: n,
        generator_count: gens.len(),
        signs,
        max_defect,
        all_central,
        sign_coherent,
        all_plus,
        passed,
    }
}

pub fn covering_triviality_check(w: &Weight, s: SignChoice, tol: f64) -> CoveringReport {
    let n = genus_of_weight(w) + 1;
    covering_check_at(w.sphere_weight(), n, s, w.order() % 2 == 1, tol)
}

/// det Φ(z) = −(1/(z−p_a) − 1/(z−p_b))·(1/(z−p_c) − 1/(z−p_d)) with {a, b}
/// the punctures of sign +1.
pub fn higgs_det(z: C64, pts: &PuncturePoints, s: SignChoice) -> Result<C64, CoveringError> {
    let p = pts.points();
    for (j, pj) in p.iter().enumerate() {
        if (z - pj).norm() <= 1e-14 {
            return Err(CoveringError::EvaluationAtPuncture(j + 1));
        }
    }
    let ([a, b], [c, d]) = s.pairing();
    let f = |i: usize, j: usize| (z - p[i]).inv() - (z - p[j]).inv();
    Ok(-f(a, b) * f(c, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::TOL_ALG;

    #[test]
    fn sign_choices() {
        assert!(SignChoice::new(1, 1, -1).is_err());
        assert!(SignChoice::new(-1, -1, -1).is_err());
        assert!(SignChoice::new(2, -1, -2).is_err());
        assert_eq!("+1,-1,-1".parse::<SignChoice>().unwrap(), SignChoice::default());
        assert_eq!("-1,1,-1".parse::<SignChoice>().unwrap().sigma(), [1, -1, 1, -1]);
        assert!("1,-1".parse::<SignChoice>().is_err());
        assert_eq!(SignChoice::default().to_string(), "+1,-1,-1");
    }

    #[test]
    fn local_monodromies() {
        let w = Weight::sphere(3, 10).unwrap();
        let s = SignChoice::default();
        let m = fuchsian_local_monodromies(&w, s);
        let prod = m[3] * m[2] * m[1] * m[0];
        assert!(prod.dist(&UnimodularMatrix::identity()) < 1e-15);
        for mj in &m {
            assert!((mj.trace().re - w.mu()).abs() < 1e-14);
        }
        let odd = Weight::sphere(2, 5).unwrap();
        let m = fuchsian_local_monodromies(&odd, s);
        assert!(m[0].pow(5).dist(&UnimodularMatrix::identity()) < 1e-13);
    }

    #[test]
    fn covering_character() {
        let w = Weight::sphere(3, 10).unwrap();
        let c = CoveringSpec::new(&w, SignChoice::default());
        assert_eq!(c.sheets, 5);
        assert_eq!(c.character, [1, 1, 4, 4]);
        assert!(c.is_consistent());
    }

    #[test]
    fn generator_counts() {
        let g2 = kernel_generators(2).unwrap();
        assert_eq!(g2.len(), 5);
        assert!(g2.contains(&GroupWord::from_powers(&[(0, 2)])));
        assert_eq!(kernel_generators(5).unwrap().len(), 11);
        assert_eq!(kernel_generators(1), Err(CoveringError::BadSheetCount(1)));
    }

    #[test]
    fn kernel_membership() {
        for n in 2..9 {
            for s in [SignChoice::default(), SignChoice::new(-1, 1, -1).unwrap(), SignChoice::new(-1, -1, 1).unwrap()] {
                let sig = s.sigma().map(|v| v as i64);
                for w in kernel_generators_for(n, s).unwrap() {
                    assert_eq!(w.weighted_exponent_sum(&sig[..3]).rem_euclid(n), 0, "{w}");
                }
            }
        }
    }

    #[test]
    fn triviality() {
        let w = Weight::sphere(3, 10).unwrap();
        let r = covering_triviality_check(&w, SignChoice::default(), TOL_ALG);
        assert!(r.passed && r.all_central && !r.all_plus);
        let r = covering_triviality_check(&Weight::sphere(2, 5).unwrap(), SignChoice::default(), TOL_ALG);
        assert!(r.passed && r.all_plus);
        let r = covering_check_at(0.3 + 1e-3, 5, SignChoice::default(), false, TOL_ALG);
        assert!(!r.passed);
    }

    #[test]
    fn higgs_field() {
        let pts = PuncturePoints::new(0.4).unwrap();
        let s = SignChoice::default();
        let p = pts.points();
        assert!(matches!(higgs_det(p[2], &pts, s), Err(CoveringError::EvaluationAtPuncture(3))));
        let z = C64::new(0.3, -0.7);
        let a = higgs_det(z, &pts, s).unwrap();
        let b = higgs_det(-z, &pts, s).unwrap();
        assert!((a - b).norm() < 1e-12);
        let big = C64::new(1e4, 3e3);
        let lim = higgs_det(big, &pts, s).unwrap() * big.powi(4);
        let want = -(p[1] - p[0]) * (p[3] - p[2]);
        assert!((lim - want).norm() < 1e-3 * want.norm());
        assert!(PuncturePoints::new(2.0).is_err());
    }
}
