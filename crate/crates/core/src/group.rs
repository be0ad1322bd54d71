//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! A group keeps the cyclic orders exactly as supplied (so element
//! coordinates keep their arity) and derives two normal forms from them:
//! the elementary divisors, stored per prime in a [`CanonicalGroupKey`],
//! and the invariant factor chain `m_1 | m_2 | ... | m_k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fast_quotient::{self, PPrimaryPart};
use crate::numutil::{self, Factorization};

/// Isomorphism-class fingerprint of a finite abelian group: for every prime
/// `p` dividing the order, the exponents of the elementary divisors
/// `p^e` sorted descending. Zero exponents never appear.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGroupKey {
    primary_parts: BTreeMap<BigUint, Vec<u32>>,
}

impl CanonicalGroupKey {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds a key from arbitrary exponent lists; zeros are dropped and the
    /// rest sorted.
    pub fn from_parts<I, E>(parts: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, E)>,
        E: IntoIterator<Item = u32>,
    {
        let mut key = Self::default();
        for (p, exps) in parts {
            key.insert_part(p, exps);
        }
        key
    }

    /// Adds the cyclic factors `C_{p^e}` for each `e` to the key.
    pub fn insert_part<E: IntoIterator<Item = u32>>(&mut self, p: BigUint, exps: E) {
        let mut exps: Vec<u32> = exps.into_iter().filter(|&e| e > 0).collect();
        if exps.is_empty() {
            return;
        }
        let slot = self.primary_parts.entry(p).or_default();
        slot.append(&mut exps);
        slot.sort_unstable_by(|a, b| b.cmp(a));
    }

    pub fn primary_parts(&self) -> &BTreeMap<BigUint, Vec<u32>> {
        &self.primary_parts
    }

    pub fn is_trivial(&self) -> bool {
        self.primary_parts.is_empty()
    }

    /// Product of all elementary divisors.
    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, exps) in &self.primary_parts {
            let total: u32 = exps.iter().sum();
            acc *= p.pow(total);
        }
        acc
    }

    /// Elementary divisors `p^e`, primes ascending, exponents descending.
    pub fn elementary_divisors(&self) -> Vec<BigUint> {
        self.primary_parts
            .iter()
            .flat_map(|(p, exps)| exps.iter().map(move |&e| p.pow(e)))
            .collect()
    }

    /// Invariant factors in ascending divisibility order, units dropped.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        let len = self.primary_parts.values().map(Vec::len).max().unwrap_or(0);
        let mut largest_first = vec![BigUint::one(); len];
        for (p, exps) in &self.primary_parts {
            let mut last: Option<(u32, BigUint)> = None;
            for (slot, &e) in largest_first.iter_mut().zip(exps) {
                if last.as_ref().is_none_or(|(le, _)| *le != e) {
                    last = Some((e, p.pow(e)));
                }
                *slot *= &last.as_ref().unwrap().1;
            }
        }
        largest_first.reverse();
        largest_first
    }

    /// Exponent of the group (largest invariant factor), 1 when trivial.
    pub fn exponent(&self) -> BigUint {
        self.invariant_factors().pop().unwrap_or_else(BigUint::one)
    }

    /// Union of the factors of two keys; the key of the direct sum.
    pub fn merged(&self, other: &CanonicalGroupKey) -> CanonicalGroupKey {
        let mut out = self.clone();
        for (p, exps) in &other.primary_parts {
            out.insert_part(p.clone(), exps.iter().copied());
        }
        out
    }
}

impl fmt::Display for CanonicalGroupKey {
    /// Invariant factor chain, e.g. `C2 x C8 x C8`; `C1` when trivial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cyclic_list(f, &self.invariant_factors())
    }
}

pub(crate) fn write_cyclic_list(f: &mut fmt::Formatter<'_>, orders: &[BigUint]) -> fmt::Result {
    if orders.is_empty() {
        return write!(f, "C1");
    }
    for (i, m) in orders.iter().enumerate() {
        if i > 0 {
            write!(f, " x ")?;
        }
        write!(f, "C{m}")?;
    }
    Ok(())
}

/// Positions and exponents of one Sylow subgroup inside the presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowLayout {
    pub prime: BigUint,
    /// Indices `i` of the moduli with `nu_p(d_i) > 0`, ascending.
    pub positions: Vec<usize>,
    /// `nu_p(d_i)` at those positions.
    pub exponents: Vec<u32>,
}

/// A finite abelian group `C_{d_1} + ... + C_{d_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    moduli: Vec<BigUint>,
    canonical: CanonicalGroupKey,
    invariant_factors: Vec<BigUint>,
    sylow: Vec<SylowLayout>,
    order: BigUint,
}

/// Normalizes an arbitrary list of cyclic orders into a group.
pub fn make_group<T: Clone + Into<BigInt>>(moduli: &[T]) -> Result<AbelianGroup> {
    let moduli = moduli
        .iter()
        .map(|m| {
            let m: BigInt = m.clone().into();
            match m.sign() {
                Sign::Plus => Ok(m.into_parts().1),
                _ => Err(Error::NonPositiveModulus(m.to_string())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AbelianGroup::from_moduli(moduli)
}

impl AbelianGroup {
    pub fn from_moduli(moduli: Vec<BigUint>) -> Result<Self> {
        let mut cache: BTreeMap<&BigUint, Factorization> = BTreeMap::new();
        let mut prev: Option<&BigUint> = None;
        let mut by_prime: BTreeMap<BigUint, SylowLayout> = BTreeMap::new();
        for (i, d) in moduli.iter().enumerate() {
            if d.is_zero() {
                return Err(Error::NonPositiveModulus(d.to_string()));
            }
            if d.is_one() {
                continue;
            }
            let fact = match prev {
                Some(q) if q == d => &cache[q],
                _ => {
                    if !cache.contains_key(d) {
                        cache.insert(d, numutil::factorize(d)?);
                    }
                    prev = Some(d);
                    &cache[d]
                }
            };
            for (p, &e) in fact.factors() {
                let layout = match by_prime.get_mut(p) {
                    Some(l) => l,
                    None => by_prime.entry(p.clone()).or_insert_with(|| SylowLayout {
                        prime: p.clone(),
                        positions: Vec::new(),
                        exponents: Vec::new(),
                    }),
                };
                layout.positions.push(i);
                layout.exponents.push(e);
            }
        }
        let canonical = CanonicalGroupKey::from_parts(
            by_prime
                .values()
                .map(|l| (l.prime.clone(), l.exponents.iter().copied())),
        );
        let invariant_factors = canonical.invariant_factors();
        let order = canonical.order();
        Ok(AbelianGroup {
            moduli,
            canonical,
            invariant_factors,
            sylow: by_prime.into_values().collect(),
            order,
        })
    }

    pub fn moduli(&self) -> &[BigUint] {
        &self.moduli
    }

    /// Number of cyclic factors in the presentation, units included.
    pub fn arity(&self) -> usize {
        self.moduli.len()
    }

    /// Number of non-unit cyclic factors in the presentation.
    pub fn rank(&self) -> usize {
        self.moduli.iter().filter(|d| !d.is_one()).count()
    }

    pub fn canonical_key(&self) -> &CanonicalGroupKey {
        &self.canonical
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn sylow_layouts(&self) -> &[SylowLayout] {
        &self.sylow
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.sylow.iter().map(|l| &l.prime)
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn exponent(&self) -> BigUint {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigUint::one)
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.canonical == other.canonical
    }

    /// Builds an element, reducing every coordinate into `[0, d_i)`.
    pub fn element<T: Clone + Into<BigInt>>(&self, coords: &[T]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: self.moduli.len(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.moduli)
            .map(|(c, d)| {
                let c: BigInt = c.clone().into();
                match c.into_parts() {
                    (Sign::Minus, m) => {
                        let r = m % d;
                        if r.is_zero() {
                            r
                        } else {
                            d - r
                        }
                    }
                    (_, m) if &m < d => m,
                    (_, m) => m % d,
                }
            })
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigUint::zero(); self.moduli.len()],
        }
    }

    pub(crate) fn check(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch {
                expected: self.moduli.len(),
                got: x.coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(&self.moduli)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn scale(&self, k: &BigUint, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        let coords = x
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(a, d)| (a * k) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    /// All elements in lexicographic coordinate order. Only sensible for
    /// small groups.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let n = self.moduli.len();
        let mut next = Some(vec![BigUint::zero(); n]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for i in (0..n).rev() {
                succ[i] += 1u32;
                if succ[i] < self.moduli[i] {
                    next = Some(succ);
                    break;
                }
                succ[i] = BigUint::zero();
            }
            Some(GroupElement { coords: current })
        })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cyclic_list(f, &self.moduli)
    }
}

/// Residue tuple `(x_1, ..., x_n)` with `0 <= x_i < d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<BigUint>,
}

impl GroupElement {
    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// `lcm_i d_i / gcd(d_i, x_i)`.
pub fn element_order(group: &AbelianGroup, x: &GroupElement) -> Result<BigUint> {
    group.check(x)?;
    Ok(x.coords
        .iter()
        .zip(&group.moduli)
        .fold(BigUint::one(), |acc, (c, d)| acc.lcm(&(d / d.gcd(c)))))
}

/// Splits `x` into its Sylow components: for each prime dividing `|G|`, the
/// position-aligned exponents `nu_p(d_i) > 0` paired with the valuations of
/// the element there.
pub fn sylow_decompose(group: &AbelianGroup, x: &GroupElement) -> Result<BTreeMap<BigUint, PPrimaryPart>> {
    group.check(x)?;
    Ok(group
        .sylow
        .iter()
        .map(|layout| {
            (
                layout.prime.clone(),
                fast_quotient::valuations_for_layout(layout, x),
            )
        })
        .collect())
}
