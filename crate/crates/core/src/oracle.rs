//! Exhaustive ground truth for small groups.
//!
//! Nothing here uses quotients, valuations or Smith forms. Automorphisms are
//! found by trying every tuple of generator images and keeping the
//! bijective ones; quotient classes are read off torsion counts of the
//! coset space.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, CanonicalGroupKey, GroupElement};

/// Default bound on `|G|^rank` for automorphism enumeration, and on `|G|`
/// for the coset-based routines.
pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

/// A homomorphism `G -> G` given by the images of the presentation's
/// cyclic generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndomorphismTable {
    pub images: Vec<GroupElement>,
}

impl EndomorphismTable {
    pub fn apply(&self, group: &AbelianGroup, x: &GroupElement) -> Result<GroupElement> {
        let mut acc = group.identity();
        for (c, img) in x.coords().iter().zip(&self.images) {
            acc = group.add(&acc, &group.scale(c, img)?)?;
        }
        Ok(acc)
    }

    /// `self` after `other`.
    pub fn compose(&self, group: &AbelianGroup, other: &EndomorphismTable) -> Result<EndomorphismTable> {
        Ok(EndomorphismTable {
            images: other
                .images
                .iter()
                .map(|img| self.apply(group, img))
                .collect::<Result<_>>()?,
        })
    }
}

/// Machine-word view of a small group with mixed-radix element indices
/// (last coordinate fastest, matching [`AbelianGroup::elements`]).
struct SmallGroup {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
}

impl SmallGroup {
    fn new(group: &AbelianGroup, cap: u64) -> Result<Self> {
        let too_big = || Error::CapacityExceeded {
            needed: group.order().to_string(),
            cap,
        };
        let order = group.order().to_u64().filter(|&o| o <= cap).ok_or_else(too_big)?;
        let moduli: Vec<u64> = group.moduli().iter().map(|d| d.to_u64().unwrap()).collect();
        let mut strides = vec![1u64; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(SmallGroup {
            moduli,
            strides,
            order,
        })
    }

    fn encode(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.strides).map(|(a, s)| a * s).sum::<u64>() as usize
    }

    fn decode(&self, mut idx: u64) -> Vec<u64> {
        self.strides
            .iter()
            .zip(&self.moduli)
            .map(|(s, d)| {
                let c = idx / s;
                idx %= s;
                c % d
            })
            .collect()
    }

    fn add_assign(&self, acc: &mut [u64], y: &[u64]) {
        for ((a, b), d) in acc.iter_mut().zip(y).zip(&self.moduli) {
            *a = (*a + b) % d;
        }
    }

    fn to_element(&self, group: &AbelianGroup, x: &[u64]) -> GroupElement {
        group.element(x).expect("arity matches")
    }

    fn coords_of(&self, x: &GroupElement) -> Vec<u64> {
        x.coords().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    /// Elements annihilated by `d`.
    fn torsion(&self, d: u64) -> Vec<Vec<u64>> {
        (0..self.order)
            .map(|i| self.decode(i))
            .filter(|y| {
                y.iter()
                    .zip(&self.moduli)
                    .all(|(c, m)| (c * d).is_multiple_of(*m))
            })
            .collect()
    }

    /// Whether the homomorphism with these generator images is injective.
    fn is_injective(&self, images: &[&Vec<u64>], seen: &mut [u64]) -> bool {
        seen.iter_mut().for_each(|w| *w = 0);
        let n = self.moduli.len();
        let mut digits = vec![0u64; n];
        let mut value = vec![0u64; n];
        for _ in 0..self.order {
            let idx = self.encode(&value);
            if seen[idx / 64] >> (idx % 64) & 1 == 1 {
                return false;
            }
            seen[idx / 64] |= 1 << (idx % 64);
            // odometer step; a wrapping digit also contributes +image since
            // d_j * image_j = 0
            let mut j = n;
            while j > 0 {
                j -= 1;
                self.add_assign(&mut value, images[j]);
                digits[j] += 1;
                if digits[j] < self.moduli[j] {
                    break;
                }
                digits[j] = 0;
            }
        }
        true
    }

    fn automorphisms(&self) -> Vec<Vec<Vec<u64>>> {
        let n = self.moduli.len();
        let candidates: Vec<Vec<Vec<u64>>> = self.moduli.iter().map(|&d| self.torsion(d)).collect();
        let mut out = Vec::new();
        if n == 0 {
            out.push(Vec::new());
            return out;
        }
        let mut seen = vec![0u64; (self.order as usize).div_ceil(64)];
        let mut choice = vec![0usize; n];
        loop {
            let images: Vec<&Vec<u64>> = choice
                .iter()
                .zip(&candidates)
                .map(|(&c, list)| &list[c])
                .collect();
            if self.is_injective(&images, &mut seen) {
                out.push(images.into_iter().cloned().collect());
            }
            let mut j = n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                choice[j] += 1;
                if choice[j] < candidates[j].len() {
                    break;
                }
                choice[j] = 0;
            }
        }
    }

    fn apply(&self, images: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.moduli.len()];
        for (c, img) in x.iter().zip(images) {
            for ((a, b), d) in acc.iter_mut().zip(img).zip(&self.moduli) {
                *a = (*a + c * b) % d;
            }
        }
        acc
    }
}

fn search_space_check(group: &AbelianGroup, cap: u64) -> Result<()> {
    let needed = group.order().pow(group.rank() as u32);
    match needed.to_u64() {
        Some(n) if n <= cap => Ok(()),
        _ => Err(Error::CapacityExceeded {
            needed: needed.to_string(),
            cap,
        }),
    }
}

pub fn enumerate_automorphisms(group: &AbelianGroup) -> Result<Vec<EndomorphismTable>> {
    enumerate_automorphisms_with_cap(group, DEFAULT_SEARCH_CAP)
}

/// Every automorphism of `group`, sorted. Fails when `|G|^rank > cap`.
pub fn enumerate_automorphisms_with_cap(group: &AbelianGroup, cap: u64) -> Result<Vec<EndomorphismTable>> {
    search_space_check(group, cap)?;
    let small = SmallGroup::new(group, cap)?;
    let mut out: Vec<EndomorphismTable> = small
        .automorphisms()
        .into_iter()
        .map(|images| EndomorphismTable {
            images: images.iter().map(|y| small.to_element(group, y)).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `p^((m-1) n^2) * prod_{j<n} (p^n - p^j)`, the order of `Aut(C_{p^m}^n)`.
pub fn aut_order_homocyclic(p: &BigUint, m: u32, n: u32) -> BigUint {
    assert!(m >= 1 && n >= 1);
    let pn = p.pow(n);
    let gl: BigUint = (0..n).map(|j| &pn - p.pow(j)).product();
    p.pow((m - 1) * n * n) * gl
}

/// Orbit partition of the natural `Aut(G)` action. Orbits are sorted
/// internally and listed by smallest member.
pub fn brute_orbits(group: &AbelianGroup) -> Result<Vec<Vec<GroupElement>>> {
    brute_orbits_with_cap(group, DEFAULT_SEARCH_CAP)
}

pub fn brute_orbits_with_cap(group: &AbelianGroup, cap: u64) -> Result<Vec<Vec<GroupElement>>> {
    search_space_check(group, cap)?;
    let small = SmallGroup::new(group, cap)?;
    let auts = small.automorphisms();
    let mut orbit_of = vec![usize::MAX; small.order as usize];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for idx in 0..small.order {
        if orbit_of[idx as usize] != usize::MAX {
            continue;
        }
        let x = small.decode(idx);
        let id = orbits.len();
        let mut members = Vec::new();
        for a in &auts {
            let y = small.encode(&small.apply(a, &x));
            if orbit_of[y] == usize::MAX {
                orbit_of[y] = id;
                members.push(y);
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    Ok(orbits
        .into_iter()
        .map(|o| {
            o.into_iter()
                .map(|i| small.to_element(group, &small.decode(i as u64)))
                .collect()
        })
        .collect())
}

/// Searches `Aut(G)` for some `phi` with `phi(x) = y`.
pub fn brute_are_automorphic(group: &AbelianGroup, x: &GroupElement, y: &GroupElement) -> Result<bool> {
    group.check(x)?;
    group.check(y)?;
    search_space_check(group, DEFAULT_SEARCH_CAP)?;
    let small = SmallGroup::new(group, DEFAULT_SEARCH_CAP)?;
    let (xs, ys) = (small.coords_of(x), small.coords_of(y));
    Ok(small.automorphisms().iter().any(|a| small.apply(a, &xs) == ys))
}

/// Isomorphism class of `G/<x>` from the torsion counts of the coset space.
///
/// For each prime `p` and `k >= 0`, `t_k` is the number of cosets killed by
/// `p^k`; `log_p(t_k / t_(k-1))` counts the elementary divisors `p^e` with
/// `e >= k`.
pub fn brute_quotient_key(group: &AbelianGroup, x: &GroupElement) -> Result<CanonicalGroupKey> {
    brute_quotient_key_with_cap(group, x, DEFAULT_SEARCH_CAP)
}

pub fn brute_quotient_key_with_cap(
    group: &AbelianGroup,
    x: &GroupElement,
    cap: u64,
) -> Result<CanonicalGroupKey> {
    group.check(x)?;
    let small = SmallGroup::new(group, cap)?;
    let xs = small.coords_of(x);

    let mut in_sub = vec![false; small.order as usize];
    let mut acc = vec![0u64; xs.len()];
    let mut sub_order = 0u64;
    loop {
        let i = small.encode(&acc);
        if in_sub[i] {
            break;
        }
        in_sub[i] = true;
        sub_order += 1;
        small.add_assign(&mut acc, &xs);
    }
    let quotient_order = small.order / sub_order;

    let mut key = CanonicalGroupKey::trivial();
    for p in group.primes() {
        let p = p.to_u64().unwrap();
        // counts of elements g with p^k g in <x>, as cosets
        let mut counts = vec![1u64];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let killed = (0..small.order)
                .filter(|&i| {
                    let g = small.decode(i);
                    let scaled: Vec<u64> = g
                        .iter()
                        .zip(&small.moduli)
                        .map(|(c, d)| (c % d) * (pk % d) % d)
                        .collect();
                    in_sub[small.encode(&scaled)]
                })
                .count() as u64
                / sub_order;
            let prev = *counts.last().unwrap();
            if killed == prev {
                break;
            }
            counts.push(killed);
            if killed * p > quotient_order {
                break;
            }
        }
        // r[k] = #{e_i >= k} for k >= 1
        let ranks: Vec<u32> = counts
            .windows(2)
            .map(|w| {
                let mut ratio = w[1] / w[0];
                let mut r = 0;
                while ratio > 1 {
                    ratio /= p;
                    r += 1;
                }
                r
            })
            .collect();
        let mut exps = Vec::new();
        for (k, &r) in ranks.iter().enumerate() {
            let next = ranks.get(k + 1).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n((k + 1) as u32, (r - next) as usize));
        }
        key.insert_part(BigUint::from(p), exps);
    }
    debug_assert_eq!(key.order(), BigUint::from(quotient_order));
    Ok(key)
}

/// `|Aut(G)|` lower bound `(p/2)^rank` for a p-group, as a rational
/// comparison `|Aut| * 2^rank >= p^rank`.
pub fn satisfies_exponential_bound(p: &BigUint, rank: u32, aut_order: &BigUint) -> bool {
    aut_order * (BigUint::one() << rank as usize) >= p.pow(rank)
}
