//! Instrumented arbitrary-precision arithmetic restricted to addition,
//! subtraction, negation/absolute value, comparison, and single-bit shifts.
//!
//! Every operation goes through an [`AuditContext`] that tallies what ran, so
//! callers can prove after the fact that a computation stayed inside the
//! permitted set. Multiplication and division exist only as loudly named
//! escape hatches for oracles and tests; nothing on the factoring path calls
//! them, and the tallies show it.
//!
//! Counter mapping: negation and absolute value tally as subtractions
//! (`0 - x`), and magnitude comparison tallies as a comparison. Sign and zero
//! tests on an [`AuditedInt`] are structural reads of a stored value, not
//! arithmetic, and are not tallied.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision signed integer whose arithmetic is only reachable
/// through an [`AuditContext`].
///
/// The type deliberately implements no operator traits: adding two values
/// without a context is a compile error, which is what keeps the tallies
/// honest.
#[derive(Clone, Debug)]
pub struct AuditedInt(BigInt);

impl AuditedInt {
    /// The value 0.
    pub fn zero() -> Self {
        AuditedInt(BigInt::zero())
    }

    /// The value 1.
    pub fn one() -> Self {
        AuditedInt(BigInt::one())
    }

    /// Borrow the underlying integer (for display, conversion, and tests).
    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }

    /// Unwrap into the underlying integer.
    pub fn into_bigint(self) -> BigInt {
        self.0
    }

    /// The value as an unsigned integer, if non-negative.
    pub fn to_biguint(&self) -> Option<BigUint> {
        self.0.to_biguint()
    }

    /// Structural zero test; not a tallied operation.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Structural sign test; not a tallied operation.
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl From<u64> for AuditedInt {
    fn from(v: u64) -> Self {
        AuditedInt(BigInt::from(v))
    }
}

impl From<i64> for AuditedInt {
    fn from(v: i64) -> Self {
        AuditedInt(BigInt::from(v))
    }
}

impl From<BigInt> for AuditedInt {
    fn from(v: BigInt) -> Self {
        AuditedInt(v)
    }
}

impl From<BigUint> for AuditedInt {
    fn from(v: BigUint) -> Self {
        AuditedInt(BigInt::from(v))
    }
}

impl fmt::Display for AuditedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Operation tallies accumulated by one context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Additions.
    pub adds: u64,
    /// Subtractions, negations, and absolute values.
    pub subs: u64,
    /// Single-bit shifts in either direction.
    pub shifts: u64,
    /// Comparisons, including magnitude comparisons.
    pub cmps: u64,
    /// Escape-hatch multiplications.
    pub muls: u64,
    /// Escape-hatch divisions.
    pub divs: u64,
}

impl OpCounts {
    /// Counts accumulated since an earlier snapshot of the same context.
    pub fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            adds: self.adds - earlier.adds,
            subs: self.subs - earlier.subs,
            shifts: self.shifts - earlier.shifts,
            cmps: self.cmps - earlier.cmps,
            muls: self.muls - earlier.muls,
            divs: self.divs - earlier.divs,
        }
    }

    /// True when no escape hatch ever fired.
    pub fn permitted_only(&self) -> bool {
        self.muls == 0 && self.divs == 0
    }

    /// True when nothing at all ran.
    pub fn all_zero(&self) -> bool {
        *self == OpCounts::default()
    }
}

/// Counter-carrying arithmetic context.
///
/// Create one per run and keep it private to that run; the counters live here
/// rather than in global state, so concurrent runs never contend.
#[derive(Clone, Debug, Default)]
pub struct AuditContext {
    counts: OpCounts,
}

impl AuditContext {
    /// Fresh context with all tallies at zero.
    pub fn new() -> Self {
        AuditContext::default()
    }

    /// Snapshot of the tallies so far.
    pub fn report(&self) -> OpCounts {
        self.counts
    }

    /// Reset every tally to zero.
    pub fn reset(&mut self) {
        self.counts = OpCounts::default();
    }

    /// `x + y`.
    pub fn add(&mut self, x: &AuditedInt, y: &AuditedInt) -> AuditedInt {
        self.counts.adds += 1;
        AuditedInt(&x.0 + &y.0)
    }

    /// `x += y`, reusing `x`'s storage.
    pub fn add_assign(&mut self, x: &mut AuditedInt, y: &AuditedInt) {
        self.counts.adds += 1;
        x.0 += &y.0;
    }

    /// `x - y`.
    pub fn sub(&mut self, x: &AuditedInt, y: &AuditedInt) -> AuditedInt {
        self.counts.subs += 1;
        AuditedInt(&x.0 - &y.0)
    }

    /// `x -= y`, reusing `x`'s storage.
    pub fn sub_assign(&mut self, x: &mut AuditedInt, y: &AuditedInt) {
        self.counts.subs += 1;
        x.0 -= &y.0;
    }

    /// `-x`; tallies as a subtraction.
    pub fn neg(&mut self, x: &AuditedInt) -> AuditedInt {
        self.counts.subs += 1;
        AuditedInt(-&x.0)
    }

    /// `|x|`; tallies as a subtraction.
    pub fn abs(&mut self, x: &AuditedInt) -> AuditedInt {
        self.counts.subs += 1;
        AuditedInt(x.0.abs())
    }

    /// Three-way comparison of `x` and `y`.
    pub fn cmp(&mut self, x: &AuditedInt, y: &AuditedInt) -> Ordering {
        self.counts.cmps += 1;
        x.0.cmp(&y.0)
    }

    /// Three-way comparison of `|x|` and `|y|`, without materializing either
    /// magnitude.
    pub fn cmp_abs(&mut self, x: &AuditedInt, y: &AuditedInt) -> Ordering {
        self.counts.cmps += 1;
        x.0.magnitude().cmp(y.0.magnitude())
    }

    /// `x * 2`.
    pub fn shl1(&mut self, x: &AuditedInt) -> AuditedInt {
        self.counts.shifts += 1;
        AuditedInt(&x.0 << 1u32)
    }

    /// `x *= 2`, in place.
    pub fn shl1_assign(&mut self, x: &mut AuditedInt) {
        self.counts.shifts += 1;
        x.0 <<= 1u32;
    }

    /// `x / 2` for non-negative `x`.
    ///
    /// # Panics
    ///
    /// Panics when `x` is negative: halving is only defined here for
    /// non-negative operands.
    pub fn shr1(&mut self, x: &AuditedInt) -> AuditedInt {
        assert!(!x.is_negative(), "shr1 is only defined for non-negative values");
        self.counts.shifts += 1;
        AuditedInt(&x.0 >> 1u32)
    }

    /// `x /= 2` in place, for non-negative `x`.
    ///
    /// # Panics
    ///
    /// Panics when `x` is negative, like [`AuditContext::shr1`].
    pub fn shr1_assign(&mut self, x: &mut AuditedInt) {
        assert!(!x.is_negative(), "shr1 is only defined for non-negative values");
        self.counts.shifts += 1;
        x.0 >>= 1u32;
    }

    /// Escape hatch: `x * y`, tallied under `muls`.
    ///
    /// For oracles and tests only. The factoring path never calls this, and
    /// the audit report is the proof.
    pub fn mul_escape(&mut self, x: &AuditedInt, y: &AuditedInt) -> AuditedInt {
        self.counts.muls += 1;
        AuditedInt(&x.0 * &y.0)
    }

    /// Escape hatch: truncating quotient `x / y`, tallied under `divs`.
    ///
    /// For oracles and tests only.
    pub fn div_escape(&mut self, x: &AuditedInt, y: &AuditedInt) -> AuditedInt {
        self.counts.divs += 1;
        AuditedInt(&x.0 / &y.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> AuditedInt {
        AuditedInt::from(v)
    }

    #[test]
    fn fresh_context_reports_zero() {
        assert!(AuditContext::new().report().all_zero());
    }

    #[test]
    fn one_add_bumps_only_adds() {
        let mut ctx = AuditContext::new();
        let s = ctx.add(&int(2), &int(3));
        assert_eq!(s.as_bigint(), &BigInt::from(5));
        assert_eq!(
            ctx.report(),
            OpCounts {
                adds: 1,
                ..OpCounts::default()
            }
        );
    }

    #[test]
    fn add_identities() {
        let mut ctx = AuditContext::new();
        let x = int(417);
        assert_eq!(ctx.add(&AuditedInt::zero(), &x).as_bigint(), x.as_bigint());
        assert_eq!(ctx.add(&int(-6), &int(7)).as_bigint(), &BigInt::from(1));
    }

    #[test]
    fn shr1_halves_even_values() {
        let mut ctx = AuditContext::new();
        let h = ctx.shr1(&int(92));
        assert_eq!(h.as_bigint(), &BigInt::from(46));
        assert_eq!(ctx.report().shifts, 1);
    }

    #[test]
    #[should_panic(expected = "non-negative")]
    fn shr1_rejects_negative_values() {
        AuditContext::new().shr1(&int(-4));
    }

    #[test]
    fn abs_and_neg_tally_as_subs() {
        let mut ctx = AuditContext::new();
        assert_eq!(ctx.abs(&int(-8)).as_bigint(), &BigInt::from(8));
        assert_eq!(ctx.neg(&int(8)).as_bigint(), &BigInt::from(-8));
        assert_eq!(ctx.report().subs, 2);
        assert_eq!(ctx.report().adds, 0);
    }

    #[test]
    fn comparisons() {
        let mut ctx = AuditContext::new();
        assert_eq!(ctx.cmp(&int(6), &int(8)), Ordering::Less);
        assert_eq!(ctx.cmp_abs(&int(-9), &int(8)), Ordering::Greater);
        assert_eq!(ctx.cmp_abs(&int(-8), &int(8)), Ordering::Equal);
        assert_eq!(ctx.report().cmps, 3);
    }

    #[test]
    fn escape_hatches_tally_separately() {
        let mut ctx = AuditContext::new();
        let p = ctx.mul_escape(&int(31), &int(331));
        assert_eq!(p.as_bigint(), &BigInt::from(10261));
        let q = ctx.div_escape(&int(10261), &int(331));
        assert_eq!(q.as_bigint(), &BigInt::from(31));
        let r = ctx.report();
        assert_eq!((r.muls, r.divs), (1, 1));
        assert!(!r.permitted_only());
    }

    #[test]
    fn reset_and_since() {
        let mut ctx = AuditContext::new();
        let _ = ctx.add(&int(1), &int(1));
        let snap = ctx.report();
        let _ = ctx.sub(&int(1), &int(1));
        let delta = ctx.report().since(&snap);
        assert_eq!((delta.adds, delta.subs), (0, 1));
        ctx.reset();
        assert!(ctx.report().all_zero());
    }

    #[test]
    fn in_place_ops_match_fresh_ops() {
        let mut ctx = AuditContext::new();
        let mut x = int(1000);
        ctx.add_assign(&mut x, &int(-1));
        ctx.sub_assign(&mut x, &int(999));
        ctx.shl1_assign(&mut x);
        assert!(x.is_zero());
        let mut y = int(7);
        ctx.shr1_assign(&mut y);
        assert_eq!(y.as_bigint(), &BigInt::from(3));
    }

    proptest! {
        #[test]
        fn audited_ops_match_plain_bigint(x in any::<i128>(), y in any::<i128>()) {
            let mut ctx = AuditContext::new();
            let (ax, ay) = (AuditedInt::from(BigInt::from(x)), AuditedInt::from(BigInt::from(y)));
            prop_assert_eq!(ctx.add(&ax, &ay).into_bigint(), BigInt::from(x) + BigInt::from(y));
            prop_assert_eq!(ctx.sub(&ax, &ay).into_bigint(), BigInt::from(x) - BigInt::from(y));
            prop_assert_eq!(ctx.neg(&ax).into_bigint(), -BigInt::from(x));
            prop_assert_eq!(ctx.abs(&ay).into_bigint(), BigInt::from(y).abs());
            prop_assert_eq!(ctx.cmp(&ax, &ay), x.cmp(&y));
            prop_assert_eq!(ctx.cmp_abs(&ax, &ay), x.unsigned_abs().cmp(&y.unsigned_abs()));
            prop_assert_eq!(ctx.shl1(&ax).into_bigint(), BigInt::from(x) << 1);
            if x >= 0 {
                prop_assert_eq!(ctx.shr1(&ax).into_bigint(), BigInt::from(x >> 1));
            }
            prop_assert_eq!(ctx.mul_escape(&ax, &ay).into_bigint(), BigInt::from(x) * BigInt::from(y));
            prop_assert!(ctx.report().adds > 0);
        }
    }
}
