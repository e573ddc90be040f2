//! Integer square root with remainder, digit by digit in base 4, so the whole
//! routine stays inside the audited add/sub/shift/compare set.

use std::cmp::Ordering;

use crate::audit::{AuditContext, AuditedInt};
use crate::Error;

/// Result of [`isqrt_rem`]: `s*s + r == m` with `s*s <= m < (s+1)*(s+1)`.
#[derive(Clone, Debug)]
pub struct SqrtRem {
    /// Floor square root.
    pub s: AuditedInt,
    /// Remainder `m - s*s`.
    pub r: AuditedInt,
}

/// Floor square root of `m` with remainder, for `m >= 0`.
///
/// Classic shift-and-subtract: walk a power of four down from the top of `m`,
/// accepting a result bit whenever the trial subtrahend fits. Everything runs
/// through the audited kernel and uses only add, sub, compare, and single-bit
/// shifts, so the context's `muls`/`divs` tallies stay at zero.
///
/// # Examples
///
/// ```
/// use diofac::audit::{AuditContext, AuditedInt};
/// use diofac::isqrt::isqrt_rem;
///
/// let mut ctx = AuditContext::new();
/// let sr = isqrt_rem(&mut ctx, &AuditedInt::from(23u64)).unwrap();
/// assert_eq!(sr.s.to_string(), "4");
/// assert_eq!(sr.r.to_string(), "7");
/// assert!(ctx.report().permitted_only());
/// ```
pub fn isqrt_rem(ctx: &mut AuditContext, m: &AuditedInt) -> Result<SqrtRem, Error> {
    if m.is_negative() {
        return Err(Error::NegativeSquareRoot);
    }
    if m.is_zero() {
        return Ok(SqrtRem {
            s: AuditedInt::zero(),
            r: AuditedInt::zero(),
        });
    }

    // Largest power of four not exceeding m.
    let mut bit = AuditedInt::one();
    loop {
        let quad = ctx.shl1(&bit);
        let quad = ctx.shl1(&quad);
        if ctx.cmp(&quad, m) == Ordering::Greater {
            break;
        }
        bit = quad;
    }

    let mut num = m.clone();
    let mut res = AuditedInt::zero();
    while !bit.is_zero() {
        let trial = ctx.add(&res, &bit);
        ctx.shr1_assign(&mut res);
        if ctx.cmp(&num, &trial) != Ordering::Less {
            ctx.sub_assign(&mut num, &trial);
            ctx.add_assign(&mut res, &bit);
        }
        ctx.shr1_assign(&mut bit);
        ctx.shr1_assign(&mut bit);
    }
    Ok(SqrtRem { s: res, r: num })
}
