use std::fmt;

use rsr_core::abelmono::AbelError;
use rsr_core::algebra::AlgebraError;
use rsr_core::charvar::CharVarError;
use rsr_core::covering::CoveringError;
use rsr_core::lorentz::LorentzError;
use rsr_core::spingraft::SpinError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

/// Rejected input with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub code: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for InputError {}

fn abel(e: &AbelError) -> (&'static str, u8) {
    use AbelError::*;
    match e {
        InvalidParams(_) => ("params", EXIT_INVALID),
        NonGenericChi(_) => ("non-generic-chi", EXIT_INVALID),
        Legendre(_) => ("legendre", EXIT_FAILED),
        StepLimitExceeded { .. } => ("step-limit", EXIT_FAILED),
        PathTooCloseToPole { .. } => ("pole", EXIT_INVALID),
        NonFinite => ("non-finite", EXIT_FAILED),
        NotAdmissible(_) => ("not-admissible", EXIT_INVALID),
        BracketDoesNotStraddle { .. } => ("bracket", EXIT_FAILED),
        MaxIterations(_) => ("max-iterations", EXIT_FAILED),
        NearReduciblePoint { .. } => ("near-reducible", EXIT_INVALID),
    }
}

/// (code, exit status) for an error reaching the top level.
pub fn classify(e: &anyhow::Error) -> (&'static str, u8) {
    if let Some(i) = e.downcast_ref::<InputError>() {
        return (i.code, EXIT_INVALID);
    }
    if let Some(a) = e.downcast_ref::<AbelError>() {
        return abel(a);
    }
    if let Some(c) = e.downcast_ref::<CharVarError>() {
        let code = match c {
            CharVarError::MalformedWeight(_) | CharVarError::WeightOutOfRange(..) => "weight",
            CharVarError::DegenerateTraces | CharVarError::DegenerateTrace(_) => "degenerate",
            CharVarError::OffVariety(_) => "off-variety",
            CharVarError::Algebra(_) => "algebra",
        };
        return (code, EXIT_INVALID);
    }
    if let Some(c) = e.downcast_ref::<CoveringError>() {
        let code = match c {
            CoveringError::InvalidSigns | CoveringError::MalformedSigns(_) => "signs",
            _ => "covering",
        };
        return (code, EXIT_INVALID);
    }
    if e.downcast_ref::<AlgebraError>().is_some() {
        return ("algebra", EXIT_INVALID);
    }
    if e.downcast_ref::<LorentzError>().is_some() {
        return ("lorentz", EXIT_INVALID);
    }
    if e.downcast_ref::<SpinError>().is_some() {
        return ("spin", EXIT_INVALID);
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return ("io", EXIT_INVALID);
    }
    ("internal", EXIT_FAILED)
}

/// `E:<code>:<message>` on one line.
pub fn record(code: &str, message: &str) -> String {
    let flat: String = message.split_whitespace().collect::<Vec<_>>().join(" ");
    format!("E:{code}:{flat}")
}
