//! Quotients `G/<x>` by Sylow splitting and a linear sweep per prime.
//!
//! For a p-group `C_{p^e_1} + ... + C_{p^e_k}` and an element whose i-th
//! coordinate is `a_i p^f_i` with `p` not dividing `a_i`, the units `a_i`
//! are irrelevant up to automorphism. Sorting the `(f_i, e_i)` pairs by `f`
//! and sweeping once with a running carry yields the exponents of the
//! quotient:
//!
//! ```text
//! carry = 0
//! for i in 0..k:
//!     f_i += carry
//!     carry += max(0, e_i - f_i)
//!     survivor_i = min(f_i, e_i)
//! ```
//!
//! A zero coordinate is encoded as `f_i = e_i`, which contributes nothing to
//! the carry and survives as the full `C_{p^e_i}`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, CanonicalGroupKey, GroupElement, SylowLayout};
use crate::numutil;

/// The p-primary component of a group together with the valuations of one
/// element there, as `(f_i, e_i)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPrimaryPart {
    prime: BigUint,
    pairs: Vec<(u32, u32)>,
}

impl PPrimaryPart {
    pub fn new(prime: BigUint, pairs: Vec<(u32, u32)>) -> Result<Self> {
        for &(f, e) in &pairs {
            if f > e {
                return Err(Error::InvalidValuation { f, e });
            }
            if e == 0 {
                return Err(Error::InvalidValuation { f, e });
            }
        }
        Ok(PPrimaryPart { prime, pairs })
    }

    pub fn prime(&self) -> &BigUint {
        &self.prime
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn valuations(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(f, _)| f).collect()
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(_, e)| e).collect()
    }

    /// Stable sort by valuation; exponents travel with their valuations.
    pub fn sort_by_valuation(&mut self) {
        self.pairs.sort_by_key(|&(f, _)| f);
    }

    /// Order of the element's p-component, as an exponent of `p`.
    pub fn order_exponent(&self) -> u32 {
        self.pairs.iter().map(|&(f, e)| e - f).max().unwrap_or(0)
    }
}

pub(crate) fn valuations_for_layout(layout: &SylowLayout, x: &GroupElement) -> PPrimaryPart {
    let coords = x.coords();
    let pairs = layout
        .positions
        .iter()
        .zip(&layout.exponents)
        .map(|(&i, &e)| (numutil::nu_capped(&layout.prime, &coords[i], e), e))
        .collect();
    PPrimaryPart {
        prime: layout.prime.clone(),
        pairs,
    }
}

/// Valuations of `x` in the p-primary part of `group`, position-aligned
/// with the moduli that `p` divides. Empty when `p` does not divide `|G|`.
pub fn normalize_element_valuations(
    group: &AbelianGroup,
    x: &GroupElement,
    p: &BigUint,
) -> Result<PPrimaryPart> {
    group.check(x)?;
    Ok(group
        .sylow_layouts()
        .iter()
        .find(|l| &l.prime == p)
        .map(|l| valuations_for_layout(l, x))
        .unwrap_or_else(|| PPrimaryPart {
            prime: p.clone(),
            pairs: Vec::new(),
        }))
}

/// The carry sweep over pairs already sorted by valuation. Returns one
/// survivor per column, zeros included.
pub fn sweep_sorted(pairs: &[(u32, u32)]) -> Vec<u32> {
    let mut carry: u64 = 0;
    pairs
        .iter()
        .map(|&(f, e)| {
            let f = f as u64 + carry;
            let e = e as u64;
            carry += e.saturating_sub(f);
            f.min(e) as u32
        })
        .collect()
}

/// Exponents of `H/<x>` for the p-group `H` described by `part`, sorted
/// descending with trivial factors removed.
pub fn p_group_quotient(part: &PPrimaryPart) -> Result<Vec<u32>> {
    for &(f, e) in &part.pairs {
        if f > e {
            return Err(Error::InvalidValuation { f, e });
        }
    }
    let mut pairs = part.pairs.clone();
    pairs.sort_by_key(|&(f, _)| f);
    let mut survivors = sweep_sorted(&pairs);
    survivors.retain(|&s| s > 0);
    survivors.sort_unstable_by(|a, b| b.cmp(a));
    Ok(survivors)
}

/// `G/<x>` via Sylow splitting.
pub fn quotient(group: &AbelianGroup, x: &GroupElement) -> Result<CanonicalGroupKey> {
    group.check(x)?;
    let mut key = CanonicalGroupKey::trivial();
    for layout in group.sylow_layouts() {
        let part = valuations_for_layout(layout, x);
        key.insert_part(layout.prime.clone(), p_group_quotient(&part)?);
    }
    Ok(key)
}
