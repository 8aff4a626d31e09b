//! The coefficient ring: a Grassmann algebra on `xi` and `N` external odd
//! constants `theta_k`, over the fraction field of exponential polynomials in
//! `x` with rational frequencies. All values are immutable and all operations
//! are pure functions.

pub mod grassmann;
pub mod poly;
pub mod scalar;
pub mod superconst;
pub mod superfn;

pub use grassmann::GrassmannMono;
pub use poly::Rat;
pub use scalar::{ExpMono, ScalarFn, ScalarFrac};
pub use superconst::SuperConst;
pub use superfn::SuperFn;

/// Fixes the ambient Grassmann algebra: the number of external odd constants
/// `theta_1..theta_N`. All values in one computation share one context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddContext {
    pub n: usize,
}

impl OddContext {
    pub fn new(n: usize) -> Self {
        assert!(n <= grassmann::MAX_THETAS, "too many odd constants");
        OddContext { n }
    }

    /// All Grassmann monomials available in this context, in canonical order.
    pub fn all_monomials(&self) -> Vec<GrassmannMono> {
        let mut out = Vec::with_capacity(1 << (self.n + 1));
        for mask in 0u64..(1 << (self.n + 1)) {
            let has_xi = mask & 1 != 0;
            let thetas: Vec<usize> = (1..=self.n).filter(|k| mask & (1 << k) != 0).collect();
            out.push(GrassmannMono::from_parts(has_xi, &thetas));
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FuncRingError {
    #[error("context mismatch: {left} odd constants vs {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("element is not invertible (zero body)")]
    NotInvertible,
    #[error("element is not a constant")]
    NotConstant,
    #[error("unknown generator theta{index}: context has {max} odd constants")]
    UnknownGenerator { index: usize, max: usize },
    #[error("division by zero")]
    DivisionByZero,
}
