//! Reference arithmetic for differential testing.
//!
//! Everything in this module multiplies and divides freely. It exists to
//! check the addition-only engine against classical number theory, so it
//! favors obviousness over speed: trial division, a plain sieve, and
//! textbook Miller-Rabin with a fixed base set that is exact for `u64`.

/// Floor square root of a `u64`.
pub fn isqrt_u64(n: u64) -> u64 {
    isqrt_u128(n as u128) as u64
}

/// Floor square root of a `u128`, by Newton iteration from a floating seed.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // f64 gives roughly 52 good bits; two corrected iterations close the gap.
    let mut x = (n as f64).sqrt() as u128 + 1;
    loop {
        let next = (x + n / x) / 2;
        if next >= x {
            break;
        }
        x = next;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Prime factorization by trial division, smallest prime first, as
/// `(prime, exponent)` pairs. `n = 1` yields an empty list.
pub fn trial_division_factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorization is defined for n >= 1");
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut d = 3;
    while d <= n / d {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += 2;
    }
    push(n, u32::from(n > 1));
    out
}

/// Every divisor of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1];
    for (p, e) in trial_division_factorize(n) {
        let base = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Largest divisor of `n` that is at most `isqrt(n)`; equals 1 exactly when
/// `n` is 1 or prime.
pub fn largest_divisor_leq_sqrt(n: u64) -> u64 {
    let bound = isqrt_u64(n);
    divisors(n)
        .into_iter()
        .filter(|&d| d <= bound)
        .max()
        .expect("1 always divides")
}

/// Primes at or below `limit`, ascending, by the sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut m = p * p;
        while m <= limit {
            composite[m] = true;
            m += p;
        }
    }
    primes
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test, exact for every `u64`.
///
/// The fixed base set `{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}` is
/// known to have no strong pseudoprime below `3.3 * 10^24`, which covers the
/// whole input type.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest-prime-factor table for every integer up to a fixed limit, for
/// fast repeated factorization in differential sweeps.
pub struct DivisorTable {
    spf: Vec<u32>,
}

impl DivisorTable {
    /// Build the table for all `n <= limit`.
    pub fn up_to(limit: u32) -> Self {
        let size = limit as usize + 1;
        let mut spf: Vec<u32> = vec![0; size];
        for p in 2..size {
            if spf[p] != 0 {
                continue;
            }
            let mut m = p;
            while m < size {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        DivisorTable { spf }
    }

    /// Largest `n` the table covers.
    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    /// Smallest prime factor of `n`, which must be in `2..=limit`.
    pub fn smallest_factor(&self, n: u32) -> u32 {
        assert!(n >= 2 && n <= self.limit(), "n out of table range");
        self.spf[n as usize]
    }

    /// Prime factorization of `n <= limit`, smallest prime first.
    pub fn factorize(&self, mut n: u32) -> Vec<(u64, u32)> {
        assert!(n >= 1 && n <= self.limit(), "n out of table range");
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            match out.last_mut() {
                Some((q, e)) if *q == p as u64 => *e += 1,
                _ => out.push((p as u64, 1)),
            }
            n /= p;
        }
        out
    }

    /// True when `n <= limit` is prime.
    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.smallest_factor(n) == n
    }
}
