//! Factor odd integers using only addition, subtraction, comparison, and
//! single-bit shifts.
//!
//! An odd `n = 2a + 1` splits as `n = (2b + 1)(2c + 1)` exactly when the
//! residual `y = 2bc + b + c - a` has an integer root. The [`engine`] walks
//! that residual to zero with purely incremental updates, starting both
//! coordinates at `isqrt(a/2)`; the [`audit`] kernel it runs on tallies every
//! arithmetic operation so the absence of multiplication and division is a
//! checkable fact rather than a claim. On top of that sit a complete
//! factorizer ([`factorize`]), an unrestricted trial-division ground truth for
//! differential testing ([`oracle`]), and a measurement harness ([`bench`](mod@bench))
//! that compares real iteration counts against the closed form and tracks how
//! the growth exponent moves with input size and factor imbalance.

pub mod audit;
pub mod bench;
pub mod engine;
pub mod factorize;
pub mod isqrt;
pub mod oracle;

/// Errors shared across the crate.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An engine input was even; the search domain is odd integers.
    #[error("n must be odd")]
    EvenInput,
    /// An engine input was zero; the search domain starts at 1.
    #[error("n must be at least 1")]
    ZeroInput,
    /// Square root of a negative value requested.
    #[error("square root of a negative value")]
    NegativeSquareRoot,
    /// A pair `(p, q)` was given with `p > q`.
    #[error("p must not exceed q")]
    UnorderedPair,
    /// Primality was asked about a value below 3.
    #[error("primality is defined here for odd n >= 3")]
    BelowRange,
    /// The step budget ran out before the answer was determined.
    #[error("iteration budget exhausted")]
    BudgetExhausted,
    /// A sweep cell asks for primes that do not fit the sampler's 64-bit
    /// range.
    #[error("no {bits}-bit n with gap {gap} fits the 64-bit prime sampler")]
    InfeasibleCell {
        /// Requested bit length of `n`.
        bits: u32,
        /// Requested `log2(q) - log2(p)`.
        gap: u32,
    },
}
