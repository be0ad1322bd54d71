//! Deciding whether `phi(x) = y` for some automorphism `phi` of `G`.
//!
//! Two elements are automorphic images of each other exactly when
//! `G/<x>` and `G/<y>` are isomorphic, so the decision reduces to comparing
//! two canonical quotient keys.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fast_quotient::{self, PPrimaryPart};
use crate::group::{AbelianGroup, CanonicalGroupKey, GroupElement};
use crate::snf;

/// Which quotient algorithm to run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Method {
    /// Sylow splitting plus the per-prime carry sweep.
    #[default]
    Fast,
    /// Smith Normal Form of the full relation matrix.
    Snf,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Fast, Method::Snf];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Fast => "fast",
            Method::Snf => "snf",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Method::Fast),
            "snf" => Ok(Method::Snf),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

pub fn quotient_key(group: &AbelianGroup, x: &GroupElement, method: Method) -> Result<CanonicalGroupKey> {
    match method {
        Method::Fast => fast_quotient::quotient(group, x),
        Method::Snf => snf::quotient_by_snf(group, x),
    }
}

/// True iff some automorphism of `group` maps `x` to `y`.
pub fn are_automorphic(group: &AbelianGroup, x: &GroupElement, y: &GroupElement) -> Result<bool> {
    are_automorphic_with(group, x, y, Method::Fast)
}

pub fn are_automorphic_with(
    group: &AbelianGroup,
    x: &GroupElement,
    y: &GroupElement,
    method: Method,
) -> Result<bool> {
    group.check(x)?;
    group.check(y)?;
    match method {
        Method::Fast => {
            // valuations give the element orders for free
            let parts = |e: &GroupElement| -> Vec<PPrimaryPart> {
                group
                    .sylow_layouts()
                    .iter()
                    .map(|l| fast_quotient::valuations_for_layout(l, e))
                    .collect()
            };
            let (px, py) = (parts(x), parts(y));
            if px
                .iter()
                .zip(&py)
                .any(|(a, b)| a.order_exponent() != b.order_exponent())
            {
                return Ok(false);
            }
            for (a, b) in px.iter().zip(&py) {
                if fast_quotient::p_group_quotient(a)? != fast_quotient::p_group_quotient(b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Method::Snf => {
            if crate::group::element_order(group, x)? != crate::group::element_order(group, y)? {
                return Ok(false);
            }
            Ok(snf::quotient_by_snf(group, x)? == snf::quotient_by_snf(group, y)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{element_order, make_group};
    use num_bigint::BigUint;

    fn key(parts: &[(u64, &[u32])]) -> CanonicalGroupKey {
        CanonicalGroupKey::from_parts(parts.iter().map(|(p, e)| (BigUint::from(*p), e.iter().copied())))
    }

    #[test]
    fn swap_and_unit_scaling() {
        let g = make_group(&[4u64, 4]).unwrap();
        let x = g.element(&[1u64, 0]).unwrap();
        let y = g.element(&[0u64, 3]).unwrap();
        for m in Method::ALL {
            assert!(are_automorphic_with(&g, &x, &y, m).unwrap());
        }
    }

    #[test]
    fn same_order_different_orbit() {
        let g = make_group(&[2u64, 4]).unwrap();
        let x = g.element(&[1u64, 0]).unwrap();
        let y = g.element(&[0u64, 2]).unwrap();
        assert_eq!(element_order(&g, &x).unwrap(), element_order(&g, &y).unwrap());
        assert_eq!(quotient_key(&g, &x, Method::Fast).unwrap(), key(&[(2, &[2])]));
        assert_eq!(quotient_key(&g, &y, Method::Fast).unwrap(), key(&[(2, &[1, 1])]));
        for m in Method::ALL {
            assert!(!are_automorphic_with(&g, &x, &y, m).unwrap());
        }
    }

    #[test]
    fn all_ones_vs_all_threes_in_c4_power() {
        for n in [1usize, 2, 3, 7, 20, 64] {
            let g = make_group(&vec![4u64; n]).unwrap();
            let x = g.element(&vec![1u64; n]).unwrap();
            let y = g.element(&vec![3u64; n]).unwrap();
            assert!(are_automorphic(&g, &x, &y).unwrap(), "n={n}");
            if n <= 20 {
                assert!(are_automorphic_with(&g, &x, &y, Method::Snf).unwrap());
            }
        }
    }

    #[test]
    fn quotient_key_dispatch() {
        let g = make_group(&[2u64, 4, 8, 8]).unwrap();
        let x = g.element(&[2u64, 1, 2, 4]).unwrap();
        for m in Method::ALL {
            assert_eq!(quotient_key(&g, &x, m).unwrap(), key(&[(2, &[3, 3, 1])]));
        }
        let g = make_group(&[5u64]).unwrap();
        let x = g.element(&[0u64]).unwrap();
        for m in Method::ALL {
            assert_eq!(quotient_key(&g, &x, m).unwrap(), key(&[(5, &[1])]));
        }
    }

    #[test]
    fn arity_mismatch() {
        let g = make_group(&[4u64, 4]).unwrap();
        let h = make_group(&[4u64]).unwrap();
        let x = g.identity();
        let y = h.identity();
        assert_eq!(
            are_automorphic(&g, &x, &y),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn method_parsing() {
        assert_eq!("fast".parse::<Method>().unwrap(), Method::Fast);
        assert_eq!("snf".parse::<Method>().unwrap(), Method::Snf);
        assert!("fastest".parse::<Method>().is_err());
        assert_eq!(Method::default(), Method::Fast);
    }

    #[test]
    fn relation_axioms_and_order_necessity() {
        for moduli in [vec![2u64, 4], vec![6, 4], vec![2, 2, 4], vec![3, 9], vec![8, 4]] {
            let g = make_group(&moduli).unwrap();
            let els: Vec<_> = g.elements().collect();
            let rel: Vec<Vec<bool>> = els
                .iter()
                .map(|x| els.iter().map(|y| are_automorphic(&g, x, y).unwrap()).collect())
                .collect();
            for i in 0..els.len() {
                assert!(rel[i][i]);
                for j in 0..els.len() {
                    assert_eq!(rel[i][j], rel[j][i]);
                    if rel[i][j] {
                        assert_eq!(
                            element_order(&g, &els[i]).unwrap(),
                            element_order(&g, &els[j]).unwrap()
                        );
                        for (via_j, via_i) in rel[j].iter().zip(&rel[i]) {
                            assert!(!via_j || *via_i);
                        }
                    }
                }
            }
        }
    }
}
