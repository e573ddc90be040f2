//! Complete factorization and primality certification built on the engine.
//!
//! The engine answers one question per run: the largest divisor of an odd
//! `n` at or below its square root. This module peels powers of two, then
//! applies that answer recursively, splitting smaller cofactors first, until
//! only primes remain or a step budget runs out. Every engine run is logged
//! so callers can report exactly what the search did.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::audit::AuditContext;
use crate::engine::{self, OddInteger, RunStatus};
use crate::Error;

/// One engine run made during a factorization: its input and what came out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLog {
    /// The odd value the engine was pointed at.
    pub input: BigUint,
    /// Smaller output factor (1 when `input` is prime).
    pub p: BigUint,
    /// Cofactor `input / p`.
    pub q: BigUint,
    /// Steps the run took.
    pub iterations: u64,
}

/// Outcome of [`full_factorization`].
#[derive(Clone, Debug)]
pub struct Factorization {
    /// Prime factors with multiplicity, ascending. Includes 2 when the input
    /// was even. Primality of every entry was certified by an engine run
    /// (except 2, which is outside the engine's domain).
    pub factors: Vec<(BigUint, u32)>,
    /// Runs that split a composite into two nontrivial parts.
    pub splits: Vec<RunLog>,
    /// Runs that certified a value prime.
    pub certifications: Vec<RunLog>,
    /// Values still unfactored when the budget ran out; empty on completion.
    pub pending: Vec<BigUint>,
    /// True when `factors` is the complete prime factorization.
    pub complete: bool,
}

impl Factorization {
    /// Recompute the input from the pieces: the product of `factors` (with
    /// exponents) and everything in `pending`. Always equals the original
    /// `n`, finished or not.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        for v in &self.pending {
            acc *= v;
        }
        acc
    }

    /// Total steps across every logged run.
    pub fn total_iterations(&self) -> u64 {
        self.splits
            .iter()
            .chain(&self.certifications)
            .map(|r| r.iterations)
            .sum()
    }
}

/// Split `n >= 1` as `2^e * m` with `m` odd, returning `(e, m)`.
pub fn strip_twos(n: &BigUint) -> (u64, BigUint) {
    let e = n.trailing_zeros().expect("n must be nonzero");
    (e, n >> e)
}

/// Primality certificate for an odd `n`, as decided by a finished run.
#[derive(Clone, Debug)]
pub struct PrimalityCertificate {
    /// The verdict.
    pub is_prime: bool,
    /// Steps the deciding run took.
    pub iterations: u64,
    /// The nontrivial split found, when composite.
    pub witness: Option<(BigUint, BigUint)>,
}

/// Decide primality of odd `n >= 3` by running the search to completion.
///
/// The run halts at the largest divisor of `n` at or below `sqrt(n)`; the
/// verdict is prime exactly when that divisor is 1. A `budget` cap that
/// expires first yields [`Error::BudgetExhausted`].
pub fn certify_prime(n: &BigUint, budget: Option<u64>) -> Result<PrimalityCertificate, Error> {
    let odd = OddInteger::new(n.clone())?;
    if odd.get().is_one() {
        return Err(Error::BelowRange);
    }
    let mut ctx = AuditContext::new();
    let res = engine::run(&mut ctx, &odd, budget);
    match res.status {
        RunStatus::BudgetExceeded => Err(Error::BudgetExhausted),
        RunStatus::TrivialOnly => Ok(PrimalityCertificate {
            is_prime: true,
            iterations: res.iterations,
            witness: None,
        }),
        RunStatus::Factored => Ok(PrimalityCertificate {
            is_prime: false,
            iterations: res.iterations,
            witness: Some((res.p, res.q)),
        }),
    }
}

/// Factor `n >= 1` completely, smaller cofactors first, within an optional
/// total step budget shared across all runs.
///
/// On budget exhaustion the result is still a valid partial answer:
/// certified primes in `factors`, everything unresolved in `pending`, and
/// `complete = false`.
///
/// # Examples
///
/// ```
/// use num_bigint::BigUint;
/// use diofac::factorize::full_factorization;
///
/// let f = full_factorization(&BigUint::from(45u32), None).unwrap();
/// let show: Vec<(String, u32)> =
///     f.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect();
/// assert_eq!(show, [("3".into(), 2), ("5".into(), 1)]);
/// assert!(f.complete);
/// assert_eq!(f.product(), BigUint::from(45u32));
/// ```
pub fn full_factorization(n: &BigUint, budget: Option<u64>) -> Result<Factorization, Error> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut splits = Vec::new();
    let mut certifications = Vec::new();
    let mut pending: Vec<BigUint> = Vec::new();

    let (e, odd_part) = strip_twos(n);
    let two_exponent = u32::try_from(e).expect("exponent of 2 fits u32");
    for _ in 0..two_exponent {
        primes.push(BigUint::from(2u32));
    }

    let mut remaining = budget;
    let mut stack: Vec<BigUint> = Vec::new();
    if !odd_part.is_one() {
        stack.push(odd_part);
    }
    while let Some(m) = stack.pop() {
        let odd = OddInteger::new(m.clone()).expect("stack holds odd values above 1");
        let mut ctx = AuditContext::new();
        let res = engine::run(&mut ctx, &odd, remaining);
        if let Some(r) = remaining.as_mut() {
            *r -= res.iterations.min(*r);
        }
        match res.status {
            RunStatus::BudgetExceeded => {
                pending.push(m);
                pending.extend(stack.drain(..).rev());
                break;
            }
            RunStatus::TrivialOnly => {
                certifications.push(RunLog {
                    input: m.clone(),
                    p: res.p,
                    q: res.q,
                    iterations: res.iterations,
                });
                primes.push(m);
            }
            RunStatus::Factored => {
                splits.push(RunLog {
                    input: m,
                    p: res.p.clone(),
                    q: res.q.clone(),
                    iterations: res.iterations,
                });
                // Pop order: smaller part first.
                stack.push(res.q);
                stack.push(res.p);
            }
        }
    }

    primes.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let complete = pending.is_empty();
    Ok(Factorization {
        factors,
        splits,
        certifications,
        pending,
        complete,
    })
}
