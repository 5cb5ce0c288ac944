//! Exact integer helpers used by the catalog and the sieve.
//!
//! Everything that can grow past 64 bits is a [`BigUint`]. The values fed in
//! here are products of small cyclotomic-style factors, so trial division
//! followed by Pollard-Brent is more than enough.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Primes below this bound are removed by trial division before rho is tried.
const TRIAL_LIMIT: u32 = 1 << 12;

/// A prime power `q = p^a` with `a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    a: u32,
    q: u64,
}

impl PrimePower {
    /// Returns `None` unless `p` is prime, `a >= 1` and `p^a` fits in a `u64`.
    pub fn new(p: u64, a: u32) -> Option<Self> {
        if a == 0 || !is_prime_u64(p) {
            return None;
        }
        let q = p.checked_pow(a)?;
        Some(PrimePower { p, a, q })
    }

    /// Decomposes `q` as a prime power, if it is one.
    pub fn from_value(q: u64) -> Option<Self> {
        if q < 2 {
            return None;
        }
        let f = factorize(&BigUint::from(q));
        match f.pairs() {
            [(p, a)] => PrimePower::new(p.to_u64()?, *a),
            _ => None,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn big(&self) -> BigUint {
        BigUint::from(self.q)
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Canonical prime factorization: primes strictly increasing, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Factorization::default()
    }

    /// Builds a factorization from arbitrary `(prime, exponent)` pairs,
    /// merging repeats and dropping zero exponents. Primality is trusted.
    pub fn from_prime_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut v: Vec<(BigUint, u32)> = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            match merged.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { pairs: merged }
    }

    pub fn pairs(&self) -> &[(BigUint, u32)] {
        &self.pairs
    }

    /// Multiplies the underlying values.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        Factorization::from_prime_pairs(self.pairs.iter().chain(other.pairs.iter()).cloned())
    }

    /// Raises the underlying value to the power `e`.
    pub fn pow(&self, e: u32) -> Factorization {
        Factorization {
            pairs: self.pairs.iter().map(|(p, k)| (p.clone(), k * e)).collect(),
        }
    }

    /// Divides by `other`, or `None` if `other` does not divide the value.
    pub fn checked_div(&self, other: &Factorization) -> Option<Factorization> {
        let mut out = self.pairs.clone();
        for (p, e) in &other.pairs {
            let slot = out.iter_mut().find(|(q, _)| q == p)?;
            slot.1 = slot.1.checked_sub(*e)?;
        }
        Some(Factorization::from_prime_pairs(out))
    }

    /// The factored value.
    pub fn value(&self) -> BigUint {
        self.pairs
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Number of divisors, tau(n).
    pub fn divisor_count(&self) -> u64 {
        self.pairs.iter().map(|(_, e)| u64::from(*e) + 1).product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// True iff `n = t^2` for some integer `t`.
pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Sieve of Eratosthenes, inclusive.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// All prime powers `p^a <= q_max`, sorted by value.
pub fn prime_powers_up_to(q_max: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for p in primes_up_to(q_max) {
        let mut a = 1;
        while let Some(pp) = PrimePower::new(p, a) {
            if pp.q > q_max {
                break;
            }
            out.push(pp);
            a += 1;
        }
    }
    out.sort_by_key(|pp| pp.q);
    out
}

/// Prime powers with `p <= p_max` and `a <= a_max`, sorted by `(p, a)`.
pub fn prime_powers_in_box(p_max: u64, a_max: u32) -> Vec<PrimePower> {
    primes_up_to(p_max)
        .into_iter()
        .flat_map(|p| (1..=a_max).filter_map(move |a| PrimePower::new(p, a)))
        .collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    miller_rabin(&BigUint::from(n))
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin over the first twenty prime bases. Deterministic below
/// 3.3e24, and overwhelmingly reliable beyond that for the sizes seen here.
fn miller_rabin(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for b in MR_BASES {
        let b = BigUint::from(b);
        if b >= *n {
            continue;
        }
        let mut x = b.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => {
            for sp in MR_BASES {
                if (n % sp).is_zero() {
                    return false;
                }
            }
            miller_rabin(n)
        }
    }
}

/// Pollard-Brent; `n` must be odd, composite and not a prime power of a tiny prime.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn split_into(n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push((n, 1));
        return;
    }
    // Perfect powers defeat rho's cycle structure less often than they
    // defeat patience; peel them first.
    for k in (2..=n.bits() as u32).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && r.pow(k) == n {
            let mut inner = Vec::new();
            split_into(r, &mut inner);
            out.extend(inner.into_iter().map(|(p, e)| (p, e * k)));
            return;
        }
    }
    let d = pollard_brent(&n);
    let other = &n / &d;
    split_into(d, out);
    split_into(other, out);
}

/// Canonical prime factorization of `n >= 1`.
pub fn factorize(n: &BigUint) -> Factorization {
    assert!(!n.is_zero(), "factorize(0) is undefined");
    let mut rest = n.clone();
    let mut pairs = Vec::new();
    for p in primes_up_to(u64::from(TRIAL_LIMIT)) {
        let p32 = p as u32;
        if (&rest % p32).is_zero() {
            let mut e = 0;
            while (&rest % p32).is_zero() {
                rest /= p32;
                e += 1;
            }
            pairs.push((BigUint::from(p), e));
        }
        if rest.is_one() {
            break;
        }
        let bound = BigUint::from(p) * p;
        if bound > rest {
            // Whatever is left is 1 or a prime.
            if !rest.is_one() {
                pairs.push((std::mem::replace(&mut rest, BigUint::one()), 1));
            }
            break;
        }
    }
    split_into(rest, &mut pairs);
    Factorization::from_prime_pairs(pairs)
}

pub fn factorize_u64(n: u64) -> Factorization {
    factorize(&BigUint::from(n))
}

/// All divisors of the factored value in ascending order.
pub fn divisors(f: &Factorization) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in f.pairs() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                acc *= p;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}
