//! Character varieties of the once-punctured torus and four-punctured sphere,
//! numerical monodromy of the abelianization family of logarithmic
//! connections, spin/grafting bookkeeping, and the dodecahedral
//! RSR representation.

pub mod abelmono;
pub mod algebra;
pub mod charvar;
pub mod covering;
pub mod dodeca;
pub mod lorentz;
pub mod spingraft;
pub mod tolerances;

pub use algebra::{Mat2, UnimodularMatrix, C64};
