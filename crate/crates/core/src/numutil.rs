//! Integer factorization, primality, p-adic valuations and Euler phi on
//! prime powers.
//!
//! Factorization runs trial division by every prime below [`TRIAL_BOUND`],
//! then Pollard's rho with Brent's cycle detection on whatever composite
//! cofactor remains. Cofactors that fit in a `u64` stay in machine
//! arithmetic; larger ones fall back to `BigUint`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Primes strictly below this bound are removed by trial division.
pub const TRIAL_BOUND: u32 = 1_000_000;

/// Miller-Rabin rounds for candidates that do not fit in 64 bits.
pub const BIG_MR_ROUNDS: usize = 40;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(78_498);
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Effort budget for the rho phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Iterations of a single rho walk before it is abandoned.
    pub max_iterations: u64,
    /// Number of fresh random polynomials tried per cofactor.
    pub max_attempts: u32,
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            max_iterations: 1 << 26,
            max_attempts: 64,
            seed: 0x5eed_ab31,
        }
    }
}

/// Prime factorization as an ordered map prime -> multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: BTreeMap<BigUint, u32>,
}

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn multiplicity(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.factors.values().map(|&k| k as u64).sum()
    }

    /// Number of divisors.
    pub fn tau(&self) -> BigUint {
        self.factors
            .values()
            .fold(BigUint::one(), |acc, &k| acc * BigUint::from(k + 1))
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, &k)| acc * p.pow(k))
    }

    pub fn insert(&mut self, p: BigUint, k: u32) {
        if k > 0 {
            *self.factors.entry(p).or_insert(0) += k;
        }
    }

    pub fn merge(&mut self, other: &Factorization) {
        for (p, &k) in &other.factors {
            self.insert(p.clone(), k);
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *k == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Factorizes `n` with the default effort budget.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with(n, &FactorConfig::default())
}

pub fn factorize_with(n: &BigUint, config: &FactorConfig) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::NonPositiveModulus(n.to_string()));
    }
    let mut out = Factorization::new();
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        let cofactor = trial_divide_u64(small, &mut out);
        if cofactor > 1 {
            factor_u64_cofactor(cofactor, config, &mut out)
                .ok_or_else(|| Error::FactorizationFailure(n.to_string()))?;
        }
        return Ok(out);
    }
    for &p in small_primes() {
        let p64 = p as u64;
        if rest.bits() <= 64 {
            let r = rest.to_u64().unwrap();
            if p64.saturating_mul(p64) > r {
                break;
            }
        }
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            out.insert(BigUint::from(p), k);
        }
        if rest.is_one() {
            return Ok(out);
        }
    }
    if let Some(small) = rest.to_u64() {
        if small > 1 {
            factor_u64_cofactor(small, config, &mut out)
                .ok_or_else(|| Error::FactorizationFailure(n.to_string()))?;
        }
        return Ok(out);
    }
    factor_big_cofactor(rest, config, &mut out).ok_or_else(|| Error::FactorizationFailure(n.to_string()))?;
    Ok(out)
}

/// Strips primes below `TRIAL_BOUND` (or below sqrt(n), whichever is first)
/// and returns the cofactor.
fn trial_divide_u64(mut n: u64, out: &mut Factorization) -> u64 {
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.insert(BigUint::from(2u32), tz);
        n >>= tz;
    }
    for &p in &small_primes()[1..] {
        let p = p as u64;
        if p * p > n {
            break;
        }
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.insert(BigUint::from(p), k);
        }
    }
    n
}

fn factor_u64_cofactor(n: u64, config: &FactorConfig, out: &mut Factorization) -> Option<()> {
    let mut stack = vec![n];
    let mut rng = StdRng::seed_from_u64(config.seed ^ n);
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.insert(BigUint::from(m), 1);
            continue;
        }
        let d = rho_u64(m, config, &mut rng)?;
        stack.push(d);
        stack.push(m / d);
    }
    Some(())
}

fn factor_big_cofactor(n: BigUint, config: &FactorConfig, out: &mut Factorization) -> Option<()> {
    let mut stack = vec![n];
    let mut rng = StdRng::seed_from_u64(config.seed);
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            factor_u64_cofactor(small, config, out)?;
            continue;
        }
        if is_probable_prime(&m) {
            out.insert(m, 1);
            continue;
        }
        let d = rho_big(&m, config, &mut rng)?;
        let q = &m / &d;
        stack.push(d);
        stack.push(q);
    }
    Some(())
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as witnesses cover
/// every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test: deterministic below 2^64, otherwise Miller-Rabin with
/// [`BIG_MR_ROUNDS`] random bases.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..64] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u32);
    let mut rng = StdRng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    'round: for _ in 0..BIG_MR_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho. Returns a non-trivial divisor of the
/// composite `n`, or `None` once the budget is spent.
fn rho_u64(n: u64, config: &FactorConfig, rng: &mut StdRng) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    for _ in 0..config.max_attempts {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        let mut g = 1;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut x = y;
        let mut ys = y;
        let mut spent = 0u64;
        while g == 1 && spent < config.max_iterations {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
        }
        if g == n {
            // batch overshot; walk back one step at a time
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, config: &FactorConfig, rng: &mut StdRng) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    for _ in 0..config.max_attempts {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_below(n);
        let f = |v: &BigUint| (v * v + &c) % n;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        while g.is_one() && spent < config.max_iterations {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (&q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// Largest `k` with `p^k | m`. `m` must be non-zero.
pub fn nu(p: &BigUint, m: &BigUint) -> u32 {
    assert!(!m.is_zero(), "valuation of zero is unbounded");
    nu_capped(p, m, u32::MAX)
}

/// `min(nu(p, m), cap)`, with `nu(p, 0)` taken as infinite.
pub fn nu_capped(p: &BigUint, m: &BigUint, cap: u32) -> u32 {
    if m.is_zero() {
        return cap;
    }
    let small_p = p.to_u64();
    if small_p == Some(2) {
        return (m.trailing_zeros().unwrap_or(0)).min(cap as u64) as u32;
    }
    if let (Some(p), Some(mut m)) = (small_p, m.to_u64()) {
        let mut k = 0;
        while k < cap && m % p == 0 {
            m /= p;
            k += 1;
        }
        return k;
    }
    let mut k = 0;
    let mut m = m.clone();
    while k < cap {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            break;
        }
        m = q;
        k += 1;
    }
    k
}

/// Number of units modulo `p^k`, i.e. `p^k - p^(k-1)`.
pub fn phi_prime_power(p: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "phi_prime_power needs k >= 1");
    let lower = p.pow(k - 1);
    &lower * p - &lower
}
