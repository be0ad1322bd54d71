//! Finite abelian groups: cyclic quotients, automorphic equivalence of
//! elements, and automorphism orbits.
//!
//! Two elements `x, y` of a finite abelian group `G` are images of each
//! other under some automorphism exactly when `G/<x>` and `G/<y>` are
//! isomorphic. The crate computes those quotients two ways (a Smith Normal
//! Form reference in [`snf`] and a near-linear Sylow-splitting sweep in
//! [`fast_quotient`]), decides equivalence in [`equivalence`], and lists all
//! orbits with exact sizes in [`orbits`]. [`oracle`] holds exhaustive
//! brute-force counterparts for small groups.
//!
//! ```
//! use abelian_core::{make_group, quotient_key, Method};
//!
//! let g = make_group(&[2u64, 4, 8, 8]).unwrap();
//! let x = g.element(&[2u64, 1, 2, 4]).unwrap();
//! assert_eq!(quotient_key(&g, &x, Method::Fast).unwrap().to_string(), "C2 x C8 x C8");
//! ```

pub mod bench;
pub mod cli;
pub mod equivalence;
pub mod error;
pub mod fast_quotient;
pub mod group;
pub mod numutil;
pub mod oracle;
pub mod orbits;
pub mod snf;

pub use equivalence::{are_automorphic, are_automorphic_with, quotient_key, Method};
pub use error::{Error, Result};
pub use group::{element_order, make_group, sylow_decompose, AbelianGroup, CanonicalGroupKey, GroupElement};
pub use orbits::{enumerate_orbits, OrbitSummary, ReducedForm};
