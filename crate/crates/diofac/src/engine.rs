//! The factor search itself: walk the residual `y = 2bc + b + c - a` to zero
//! using only audited add/sub/shift/compare steps.
//!
//! For odd `n = 2a + 1`, every factorization `n = (2b + 1)(2c + 1)` is an
//! integer root of that residual. The search starts at
//! `b = c = isqrt(floor(a/2))` and advances `c` by one every step; `b` either
//! stays (a *keep* step, when `|y| > 2b`) or drops by one (a *descend* step,
//! ties included). Both arms adjust `y` incrementally, so the loop never
//! multiplies. `y = 0` halts the search with `p = 2b + 1 <= q = 2c + 1` and
//! `p * q = n`; `p = 1` means no divisor of `n` at or below `sqrt(n)` exists,
//! i.e. `n` is prime (or 1).
//!
//! The initial residual is `y = 2(s - r) - (a mod 2)` where `(s, r)` is the
//! square root of `floor(a/2)` with remainder, which equals
//! `2*s*s + 2*s - a` without ever multiplying.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::audit::{AuditContext, AuditedInt};
use crate::isqrt::{self, SqrtRem};
use crate::Error;

/// Odd integer `>= 1`: the engine's input domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddInteger(BigUint);

impl OddInteger {
    /// Validate `n`: it must be odd and at least 1.
    pub fn new(n: BigUint) -> Result<Self, Error> {
        use num_traits::Zero;
        if n.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !n.bit(0) {
            return Err(Error::EvenInput);
        }
        Ok(OddInteger(n))
    }

    /// Convenience constructor from a machine integer.
    pub fn from_u64(n: u64) -> Result<Self, Error> {
        Self::new(BigUint::from(n))
    }

    /// The validated value.
    pub fn get(&self) -> &BigUint {
        &self.0
    }

    /// Unwrap the validated value.
    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl fmt::Display for OddInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which arm a step took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepBranch {
    /// `b` unchanged, `y += 2b + 1`.
    Keep,
    /// `b` lowered by one, `y += 2(b - c + 1)` with the new `b` and `c`.
    Descend,
}

impl fmt::Display for StepBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepBranch::Keep => "KEEP",
            StepBranch::Descend => "DESCEND",
        })
    }
}

/// Live search state `(a, b, c, y, k)`.
///
/// Beyond the public tuple, the state privately maintains running copies of
/// the step transients (`2b` and `b - c + 1`) and the constants 1 and 2, so
/// the hot loop is pure in-place add/sub with no allocation. Those copies are
/// kept exactly in sync by [`step`]; the identity `y = 2bc + b + c - a` holds
/// at every step boundary.
#[derive(Clone, Debug)]
pub struct EngineState {
    a: AuditedInt,
    b: AuditedInt,
    c: AuditedInt,
    y: AuditedInt,
    k: u64,
    twice_b: AuditedInt,
    descend_delta: AuditedInt,
    one: AuditedInt,
    two: AuditedInt,
}

impl EngineState {
    /// `a = (n - 1) / 2`.
    pub fn a(&self) -> &BigInt {
        self.a.as_bigint()
    }

    /// Current lower root coordinate; `p = 2b + 1` on halt.
    pub fn b(&self) -> &BigInt {
        self.b.as_bigint()
    }

    /// Current upper root coordinate; `q = 2c + 1` on halt.
    pub fn c(&self) -> &BigInt {
        self.c.as_bigint()
    }

    /// Current residual `2bc + b + c - a`.
    pub fn y(&self) -> &BigInt {
        self.y.as_bigint()
    }

    /// Steps taken so far; equals `c - c0` by construction.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// True once the residual has reached zero.
    pub fn is_done(&self) -> bool {
        self.y.is_zero()
    }

    fn current_pair(&self) -> (BigUint, BigUint) {
        let b = self.b.to_biguint().expect("b never goes negative");
        let c = self.c.to_biguint().expect("c never goes negative");
        reconstruct(&b, &c)
    }
}

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// A nontrivial divisor was found: `1 < p <= q < n`.
    Factored,
    /// Only the trivial split `1 * n` exists: `n` is prime or 1.
    TrivialOnly,
    /// The step budget ran out first.
    BudgetExceeded,
}

/// Outcome of [`run`] or [`resume`].
///
/// When `status` is not [`RunStatus::BudgetExceeded`], `p <= q` are odd,
/// `p * q == n`, and `p` is the largest divisor of `n` at or below `sqrt(n)`.
/// On budget exhaustion, `p` and `q` hold the candidate pair
/// `(2b + 1, 2c + 1)` at the stop point, and `state` can be fed to [`resume`]
/// to continue the search.
#[derive(Clone, Debug)]
pub struct FactorResult {
    /// Smaller factor (1 when `n` is prime or 1).
    pub p: BigUint,
    /// Cofactor `n / p`.
    pub q: BigUint,
    /// Total steps taken, including any before a resume.
    pub iterations: u64,
    /// How the run ended.
    pub status: RunStatus,
    /// Exact state at stop.
    pub state: EngineState,
}

/// Build the starting state for `n`.
///
/// Sets `a = (n - 1) / 2`, `b = c = isqrt(floor(a/2))`, and
/// `y = 2(s - r) - (a mod 2)` from the root-with-remainder, all through the
/// audited kernel.
pub fn init(ctx: &mut AuditContext, n: &OddInteger) -> EngineState {
    let one = AuditedInt::one();
    let two = AuditedInt::from(2u64);

    let n_val = AuditedInt::from(n.get().clone());
    let mut a = ctx.sub(&n_val, &one);
    ctx.shr1_assign(&mut a);
    let half_a = ctx.shr1(&a);
    let twice_half = ctx.shl1(&half_a);
    let parity = ctx.sub(&a, &twice_half);

    let SqrtRem { s, r } = isqrt::isqrt_rem(ctx, &half_a).expect("half_a is non-negative");
    let b = s.clone();
    let c = s.clone();
    let mut y = ctx.sub(&s, &r);
    ctx.shl1_assign(&mut y);
    ctx.sub_assign(&mut y, &parity);

    let twice_b = ctx.add(&b, &b);
    let mut descend_delta = ctx.sub(&b, &c);
    ctx.add_assign(&mut descend_delta, &one);

    EngineState {
        a,
        b,
        c,
        y,
        k: 0,
        twice_b,
        descend_delta,
        one,
        two,
    }
}

/// Advance the state by one step and say which arm ran.
///
/// `c` moves up by one. If `|y| > 2b` the step keeps `b` and adds `2b + 1` to
/// `y`; otherwise (ties descend) it lowers `b` by one and adds
/// `2(b - c + 1)`, with the updated coordinates, to `y`.
///
/// # Panics
///
/// Panics when called with `y = 0`: a finished search has no next step.
pub fn step(ctx: &mut AuditContext, st: &mut EngineState) -> StepBranch {
    assert!(!st.y.is_zero(), "step called on a finished state (y = 0)");
    ctx.add_assign(&mut st.c, &st.one);
    ctx.sub_assign(&mut st.descend_delta, &st.one);
    let branch = if ctx.cmp_abs(&st.y, &st.twice_b) == std::cmp::Ordering::Greater {
        ctx.add_assign(&mut st.y, &st.twice_b);
        ctx.add_assign(&mut st.y, &st.one);
        StepBranch::Keep
    } else {
        ctx.sub_assign(&mut st.b, &st.one);
        ctx.sub_assign(&mut st.descend_delta, &st.one);
        ctx.sub_assign(&mut st.twice_b, &st.two);
        ctx.add_assign(&mut st.y, &st.descend_delta);
        ctx.add_assign(&mut st.y, &st.descend_delta);
        StepBranch::Descend
    };
    st.k += 1;
    branch
}

/// Run the search on `n` until the residual hits zero, or until `budget`
/// total steps have been taken (`None` = no cap).
///
/// # Examples
///
/// ```
/// use diofac::audit::AuditContext;
/// use diofac::engine::{self, OddInteger};
///
/// let mut ctx = AuditContext::new();
/// let n = OddInteger::from_u64(10261).unwrap();
/// let res = engine::run(&mut ctx, &n, None);
/// assert_eq!((res.p.to_string(), res.q.to_string()), ("31".into(), "331".into()));
/// assert_eq!(res.iterations, 115);
/// assert!(ctx.report().permitted_only());
/// ```
pub fn run(ctx: &mut AuditContext, n: &OddInteger, budget: Option<u64>) -> FactorResult {
    let st = init(ctx, n);
    resume(ctx, st, budget)
}

/// Continue a suspended search for at most `budget` further steps
/// (`None` = no cap).
pub fn resume(ctx: &mut AuditContext, mut st: EngineState, budget: Option<u64>) -> FactorResult {
    let mut left = budget;
    while !st.y.is_zero() {
        if let Some(l) = left.as_mut() {
            if *l == 0 {
                let (p, q) = st.current_pair();
                return FactorResult {
                    p,
                    q,
                    iterations: st.k,
                    status: RunStatus::BudgetExceeded,
                    state: st,
                };
            }
            *l -= 1;
        }
        step(ctx, &mut st);
    }
    let (p, q) = st.current_pair();
    let status = if p.is_one() {
        RunStatus::TrivialOnly
    } else {
        RunStatus::Factored
    };
    FactorResult {
        p,
        q,
        iterations: st.k,
        status,
        state: st,
    }
}

/// One step's outcome, as replayed by [`trace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    /// Step number, starting at 1.
    pub k: u64,
    /// `b` after the step.
    pub b: BigUint,
    /// `c` after the step.
    pub c: BigUint,
    /// Residual after the step.
    pub y: BigInt,
    /// Arm taken.
    pub branch: StepBranch,
}

/// Replay the search on `n`, recording one row per step, up to `limit` rows
/// (`None` = until the residual hits zero). A search that starts at `y = 0`
/// yields no rows.
pub fn trace(ctx: &mut AuditContext, n: &OddInteger, limit: Option<u64>) -> Vec<TraceRow> {
    let mut st = init(ctx, n);
    let mut rows = Vec::new();
    while !st.y.is_zero() && limit.is_none_or(|l| st.k < l) {
        let branch = step(ctx, &mut st);
        rows.push(TraceRow {
            k: st.k,
            b: st.b.to_biguint().expect("b never goes negative"),
            c: st.c.to_biguint().expect("c never goes negative"),
            y: st.y.as_bigint().clone(),
            branch,
        });
    }
    rows
}

/// Map root coordinates back to the factors they encode:
/// `(2b + 1, 2c + 1)`.
pub fn reconstruct(b: &BigUint, c: &BigUint) -> (BigUint, BigUint) {
    ((b << 1u32) + 1u32, (c << 1u32) + 1u32)
}
