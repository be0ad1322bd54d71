//! Automorphism orbits of a finite abelian group with exact sizes.
//!
//! Every element of a p-group `C_{p^e_1} + ... + C_{p^e_n}` is automorphic
//! to its reduced form `(p^b_1, ..., p^b_n)`, so each p-primary part has only
//! `prod (e_i + 1)` candidates to classify. Reduced forms are grouped by the
//! quotient they produce, and each form stands for `prod c(b_i)` elements,
//! `c(b) = phi(p^(e - b))` for `b < e` and `1` for the zero coordinate.
//! Orbits of the whole group are products of per-prime orbits.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::fast_quotient::{self, PPrimaryPart};
use crate::group::{AbelianGroup, CanonicalGroupKey, GroupElement};
use crate::numutil;

/// Default bound on the number of reduced forms enumerated per call.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Per prime, the valuation tuple `(b_1, ..., b_n)` aligned with the
/// positions of that prime in the group's presentation. `b_i = e_i` is the
/// zero coordinate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedForm {
    pub parts: BTreeMap<BigUint, Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    /// Isomorphism class of `G/<x>` for every `x` in the orbit.
    pub quotient_key: CanonicalGroupKey,
    /// All reduced forms that fall in this orbit.
    pub representatives: Vec<ReducedForm>,
    pub size: BigUint,
}

/// Strips unit multipliers from `x`, prime by prime.
pub fn reduced_form(group: &AbelianGroup, x: &GroupElement) -> Result<ReducedForm> {
    let parts = crate::group::sylow_decompose(group, x)?;
    Ok(ReducedForm {
        parts: parts
            .into_iter()
            .map(|(p, part)| (p, part.valuations()))
            .collect(),
    })
}

/// Number of elements whose reduced form is `b`.
fn reduced_form_weight(p: &BigUint, exps: &[u32], b: &[u32]) -> BigUint {
    exps.iter()
        .zip(b)
        .filter(|(e, b)| b < e)
        .fold(BigUint::one(), |acc, (&e, &b)| {
            acc * numutil::phi_prime_power(p, e - b)
        })
}

fn forms_count(exps: &[u32]) -> BigUint {
    exps.iter()
        .fold(BigUint::one(), |acc, &e| acc * BigUint::from(e + 1))
}

fn check_cap(needed: &BigUint, cap: u64) -> Result<()> {
    match needed.to_u64() {
        Some(n) if n <= cap => Ok(()),
        _ => Err(Error::CapacityExceeded {
            needed: needed.to_string(),
            cap,
        }),
    }
}

/// One orbit of a single p-primary part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeOrbit {
    /// Exponents of the quotient's p-part, descending.
    pub quotient_exponents: Vec<u32>,
    pub forms: Vec<Vec<u32>>,
    pub size: BigUint,
}

/// Orbits of `C_{p^e_1} + ... + C_{p^e_n}`, in order of first appearance
/// under a lexicographic odometer over `b`.
pub fn p_group_orbits(p: &BigUint, exps: &[u32], cap: u64) -> Result<Vec<PrimeOrbit>> {
    if let Some(&e) = exps.iter().find(|&&e| e == 0) {
        return Err(Error::InvalidValuation { f: 0, e });
    }
    check_cap(&forms_count(exps), cap)?;

    let mut orbits: Vec<PrimeOrbit> = Vec::new();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut b = vec![0u32; exps.len()];
    loop {
        let part = PPrimaryPart::new(p.clone(), b.iter().copied().zip(exps.iter().copied()).collect())?;
        let q = fast_quotient::p_group_quotient(&part)?;
        let weight = reduced_form_weight(p, exps, &b);
        let slot = *index.entry(q.clone()).or_insert_with(|| {
            orbits.push(PrimeOrbit {
                quotient_exponents: q,
                forms: Vec::new(),
                size: BigUint::from(0u32),
            });
            orbits.len() - 1
        });
        orbits[slot].forms.push(b.clone());
        orbits[slot].size += weight;

        // odometer, last coordinate fastest
        let mut i = b.len();
        loop {
            if i == 0 {
                return Ok(orbits);
            }
            i -= 1;
            if b[i] < exps[i] {
                b[i] += 1;
                break;
            }
            b[i] = 0;
        }
    }
}

/// Same as [`p_group_orbits`] with [`OrbitSummary`] output.
pub fn p_group_orbit_summaries(p: &BigUint, exps: &[u32], cap: u64) -> Result<Vec<OrbitSummary>> {
    Ok(p_group_orbits(p, exps, cap)?
        .into_iter()
        .map(|o| OrbitSummary {
            quotient_key: CanonicalGroupKey::from_parts([(p.clone(), o.quotient_exponents)]),
            representatives: o
                .forms
                .into_iter()
                .map(|b| ReducedForm {
                    parts: BTreeMap::from([(p.clone(), b)]),
                })
                .collect(),
            size: o.size,
        })
        .collect())
}

/// Counters from one enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrbitStats {
    /// Reduced forms of the whole group that were classified.
    pub forms: BigUint,
}

pub fn enumerate_orbits(group: &AbelianGroup) -> Result<Vec<OrbitSummary>> {
    enumerate_orbits_with_cap(group, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_orbits_with_cap(group: &AbelianGroup, cap: u64) -> Result<Vec<OrbitSummary>> {
    Ok(enumerate_orbits_with_stats(group, cap)?.0)
}

/// All orbits of `group`: the Cartesian product of its per-prime orbits.
pub fn enumerate_orbits_with_stats(
    group: &AbelianGroup,
    cap: u64,
) -> Result<(Vec<OrbitSummary>, OrbitStats)> {
    let total = group
        .sylow_layouts()
        .iter()
        .fold(BigUint::one(), |acc, l| acc * forms_count(&l.exponents));
    check_cap(&total, cap)?;

    let mut combined = vec![OrbitSummary {
        quotient_key: CanonicalGroupKey::trivial(),
        representatives: vec![ReducedForm::default()],
        size: BigUint::one(),
    }];
    for layout in group.sylow_layouts() {
        let per_prime = p_group_orbits(&layout.prime, &layout.exponents, cap)?;
        let mut next = Vec::with_capacity(combined.len() * per_prime.len());
        for orbit in &combined {
            for po in &per_prime {
                let mut reps = Vec::with_capacity(orbit.representatives.len() * po.forms.len());
                for r in &orbit.representatives {
                    for b in &po.forms {
                        let mut r = r.clone();
                        r.parts.insert(layout.prime.clone(), b.clone());
                        reps.push(r);
                    }
                }
                let mut key = orbit.quotient_key.clone();
                key.insert_part(layout.prime.clone(), po.quotient_exponents.iter().copied());
                next.push(OrbitSummary {
                    quotient_key: key,
                    representatives: reps,
                    size: &orbit.size * &po.size,
                });
            }
        }
        combined = next;
    }
    let forms = combined
        .iter()
        .map(|o| o.representatives.len() as u64)
        .sum::<u64>();
    Ok((
        combined,
        OrbitStats {
            forms: BigUint::from(forms),
        },
    ))
}

/// Index of the orbit containing `x`, located through its reduced form.
pub fn orbit_of(orbits: &[OrbitSummary], group: &AbelianGroup, x: &GroupElement) -> Result<Option<usize>> {
    let form = reduced_form(group, x)?;
    Ok(orbits.iter().position(|o| o.representatives.contains(&form)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::are_automorphic;
    use crate::group::make_group;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn sizes(orbits: &[OrbitSummary]) -> Vec<u64> {
        orbits.iter().map(|o| o.size.to_u64().unwrap()).collect()
    }

    #[test]
    fn reduced_form_examples() {
        let g = make_group(&[4u64, 8]).unwrap();
        let x = g.element(&[3u64, 6]).unwrap();
        assert_eq!(reduced_form(&g, &x).unwrap().parts[&big(2)], vec![0, 1]);
        assert_eq!(
            reduced_form(&g, &g.identity()).unwrap().parts[&big(2)],
            vec![2, 3]
        );

        let g = make_group(&[2u64, 4, 8, 8]).unwrap();
        let x = g.element(&[2u64, 1, 2, 4]).unwrap();
        assert_eq!(reduced_form(&g, &x).unwrap().parts[&big(2)], vec![1, 0, 1, 2]);
    }

    #[test]
    fn cyclic_of_order_four() {
        let orbits = p_group_orbits(&big(2), &[2], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(orbits.len(), 3);
        assert_eq!(orbits[0].forms, vec![vec![0]]);
        assert!(orbits[0].quotient_exponents.is_empty());
        assert_eq!(orbits[0].size, big(2));
        assert_eq!(orbits[1].quotient_exponents, vec![1]);
        assert_eq!(orbits[1].size, big(1));
        assert_eq!(orbits[2].quotient_exponents, vec![2]);
        assert_eq!(orbits[2].size, big(1));
    }

    #[test]
    fn c2_plus_c4() {
        let orbits = p_group_orbits(&big(2), &[1, 2], DEFAULT_ENUMERATION_CAP).unwrap();
        let forms: usize = orbits.iter().map(|o| o.forms.len()).sum();
        assert_eq!(forms, 6);
        let mut s: Vec<u64> = orbits.iter().map(|o| o.size.to_u64().unwrap()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(s, vec![4, 2, 1, 1]);
    }

    #[test]
    fn prime_cyclic() {
        for p in [2u64, 3, 5, 101] {
            let orbits = p_group_orbits(&big(p), &[1], DEFAULT_ENUMERATION_CAP).unwrap();
            let s: Vec<u64> = orbits.iter().map(|o| o.size.to_u64().unwrap()).collect();
            assert_eq!(s, vec![p - 1, 1]);
        }
    }

    #[test]
    fn c6_orbits() {
        let g = make_group(&[6u64]).unwrap();
        let orbits = enumerate_orbits(&g).unwrap();
        let mut s = sizes(&orbits);
        s.sort_unstable();
        assert_eq!(s, vec![1, 1, 2, 2]);
    }

    #[test]
    fn trivial_group_has_one_orbit() {
        let g = make_group(&[1u64]).unwrap();
        let orbits = enumerate_orbits(&g).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size, big(1));
        assert!(orbits[0].quotient_key.is_trivial());
        assert_eq!(orbit_of(&orbits, &g, &g.identity()).unwrap(), Some(0));
    }

    fn tau(n: u64) -> usize {
        (1..=n).filter(|d| n.is_multiple_of(*d)).count()
    }

    #[test]
    fn cyclic_orbit_count_is_tau() {
        for n in 1..=1000u64 {
            let g = make_group(&[n]).unwrap();
            let orbits = enumerate_orbits(&g).unwrap();
            assert_eq!(orbits.len(), tau(n), "n={n}");
            let total: BigUint = orbits.iter().map(|o| &o.size).sum();
            assert_eq!(total, big(n));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = make_group(&[4u64; 20]).unwrap();
        assert!(matches!(
            enumerate_orbits_with_cap(&g, 1000),
            Err(Error::CapacityExceeded { .. })
        ));
        assert!(matches!(
            p_group_orbits(&big(2), &[2; 20], 1000),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn forms_counter_is_product_of_tau() {
        for moduli in [vec![12u64, 18], vec![8, 9, 10], vec![2, 4, 8, 16], vec![30, 7, 1]] {
            let g = make_group(&moduli).unwrap();
            let (_, stats) = enumerate_orbits_with_stats(&g, DEFAULT_ENUMERATION_CAP).unwrap();
            let expect: usize = moduli.iter().map(|&d| tau(d)).product();
            assert_eq!(stats.forms, big(expect as u64));
        }
    }

    #[test]
    fn orbit_membership_matches_equivalence() {
        for moduli in [
            vec![2u64, 4],
            vec![4, 4],
            vec![2, 2, 4],
            vec![6, 12],
            vec![3, 9, 2],
        ] {
            let g = make_group(&moduli).unwrap();
            let orbits = enumerate_orbits(&g).unwrap();
            let els: Vec<_> = g.elements().collect();
            let idx: Vec<usize> = els
                .iter()
                .map(|x| orbit_of(&orbits, &g, x).unwrap().unwrap())
                .collect();
            for (i, x) in els.iter().enumerate() {
                for (j, y) in els.iter().enumerate() {
                    assert_eq!(idx[i] == idx[j], are_automorphic(&g, x, y).unwrap());
                }
            }
            for (k, o) in orbits.iter().enumerate() {
                let members = idx.iter().filter(|&&i| i == k).count();
                assert_eq!(o.size, big(members as u64));
            }
        }
    }

    #[test]
    fn coprime_sums_multiply_orbit_counts() {
        let two_groups = [vec![2u64], vec![4], vec![2, 2], vec![2, 4], vec![8, 2, 2]];
        let odd_groups = [vec![3u64], vec![9], vec![3, 3], vec![5, 25], vec![7]];
        for a in &two_groups {
            for b in &odd_groups {
                let ga = make_group(a).unwrap();
                let gb = make_group(b).unwrap();
                let mut ab = a.clone();
                ab.extend(b);
                let gab = make_group(&ab).unwrap();
                assert_eq!(
                    enumerate_orbits(&gab).unwrap().len(),
                    enumerate_orbits(&ga).unwrap().len() * enumerate_orbits(&gb).unwrap().len()
                );
            }
        }
    }
}
