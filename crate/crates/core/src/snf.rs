//! Reference quotient via integer Smith Normal Form.
//!
//! `G/<x>` for `G = C_{m_1} + ... + C_{m_k}` is the cokernel of the
//! `(k+1) x k` integer matrix whose first row is `x` and whose remaining rows
//! are `diag(m_1, ..., m_k)`. Classical elimination, no modular tricks.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, CanonicalGroupKey, GroupElement};
use crate::numutil;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Row-major construction; fails if `entries.len() != rows * cols`.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    fn idx(&self, r: usize, c: usize) -> usize {
        r * self.cols + c
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (i, j) = (self.idx(a, c), self.idx(b, c));
            self.entries.swap(i, j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (i, j) = (self.idx(r, a), self.idx(r, b));
            self.entries.swap(i, j);
        }
    }

    /// `row[dst] -= q * row[src]` over columns `from..`.
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for c in from..self.cols {
            let s = self.idx(src, c);
            if self.entries[s].is_zero() {
                continue;
            }
            let delta = q * &self.entries[s];
            let d = self.idx(dst, c);
            self.entries[d] -= delta;
        }
    }

    /// `col[dst] -= q * col[src]` over rows `from..`.
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for r in from..self.rows {
            let s = self.idx(r, src);
            if self.entries[s].is_zero() {
                continue;
            }
            let delta = q * &self.entries[s];
            let d = self.idx(r, dst);
            self.entries[d] -= delta;
        }
    }

    fn max_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.bits()).max().unwrap_or(0)
    }
}

/// Observations from one elimination run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SnfStats {
    /// Widest intermediate entry, in bits.
    pub max_bits: u64,
    pub pivots: usize,
}

/// Diagonal of the Smith Normal Form of `a`: `min(rows, cols)` nonnegative
/// entries forming a divisibility chain (zeros last).
pub fn smith_normal_form(a: &IntMatrix) -> Vec<BigUint> {
    smith_normal_form_with_stats(a).0
}

pub fn smith_normal_form_with_stats(a: &IntMatrix) -> (Vec<BigUint>, SnfStats) {
    let mut m = a.clone();
    let n = m.rows.min(m.cols);
    let mut stats = SnfStats {
        max_bits: m.max_bits(),
        pivots: 0,
    };

    let mut t = 0;
    while t < n {
        let Some((pr, pc)) = smallest_nonzero(&m, t..m.rows, t..m.cols) else {
            break;
        };
        m.swap_rows(t, pr);
        m.swap_cols(t, pc);
        stats.pivots += 1;

        loop {
            let pivot = m.get(t, t).clone();
            let mut dirty = false;
            for r in t + 1..m.rows {
                let v = m.get(r, t);
                if v.is_zero() {
                    continue;
                }
                let q = v / &pivot;
                if !q.is_zero() {
                    m.row_sub(r, t, &q, t);
                }
                dirty |= !m.get(r, t).is_zero();
            }
            for c in t + 1..m.cols {
                let v = m.get(t, c);
                if v.is_zero() {
                    continue;
                }
                let q = v / &pivot;
                if !q.is_zero() {
                    m.col_sub(c, t, &q, t);
                }
                dirty |= !m.get(t, c).is_zero();
            }
            if !dirty {
                break;
            }
            // a remainder smaller than the pivot survived; promote it
            let (r, c) = smallest_in_cross(&m, t);
            m.swap_rows(t, r);
            m.swap_cols(t, c);
        }
        stats.max_bits = stats.max_bits.max(m.max_bits());
        t += 1;
    }

    let mut diag: Vec<BigUint> = (0..n).map(|i| m.get(i, i).magnitude().clone()).collect();
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if diag[i].is_one() {
                break;
            }
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    (diag, stats)
}

fn smallest_nonzero(
    m: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, &BigUint)> = None;
    for r in rows {
        for c in cols.clone() {
            let v = m.get(r, c);
            if v.sign() == Sign::NoSign {
                continue;
            }
            let mag = v.magnitude();
            if best.is_none_or(|(_, _, b)| mag < b) {
                if mag.is_one() {
                    return Some((r, c));
                }
                best = Some((r, c, mag));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Smallest nonzero entry in row `t` or column `t` of the working block.
fn smallest_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let col = smallest_nonzero(m, t..m.rows, t..t + 1);
    let row = smallest_nonzero(m, t..t + 1, t..m.cols);
    match (col, row) {
        (Some(a), Some(b)) => {
            if m.get(a.0, a.1).abs() <= m.get(b.0, b.1).abs() {
                a
            } else {
                b
            }
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => (t, t),
    }
}

/// The `(k+1) x k` relation matrix of `G/<x>` in the invariant factor
/// presentation of `G`.
pub fn quotient_matrix(group: &AbelianGroup, x: &GroupElement) -> Result<IntMatrix> {
    let coords = invariant_factor_coords(group, x)?;
    let factors = group.invariant_factors();
    let k = factors.len();
    let mut m = IntMatrix::zeros(k + 1, k);
    for (j, c) in coords.into_iter().enumerate() {
        m.set(0, j, BigInt::from(c));
    }
    for (j, f) in factors.iter().enumerate() {
        m.set(j + 1, j, BigInt::from(f.clone()));
    }
    Ok(m)
}

/// Re-expresses `x` in the invariant factor presentation
/// `C_{m_1} + ... + C_{m_k}` of its group.
///
/// Each coordinate is split by CRT into its prime-power components; per
/// prime, the components are dealt largest exponent first onto the factors
/// `m_k, m_{k-1}, ...`, then recombined by CRT inside each `m_j`.
pub fn invariant_factor_coords(group: &AbelianGroup, x: &GroupElement) -> Result<Vec<BigUint>> {
    group.check(x)?;
    let factors = group.invariant_factors();
    let k = factors.len();
    let mut out = vec![BigUint::zero(); k];
    for layout in group.sylow_layouts() {
        let p = &layout.prime;
        let mut slots: Vec<(u32, usize)> = layout
            .exponents
            .iter()
            .copied()
            .zip(layout.positions.iter().copied())
            .collect();
        slots.sort_by_key(|s| std::cmp::Reverse(s.0));
        for (rank_from_top, (e, pos)) in slots.into_iter().enumerate() {
            let j = k - 1 - rank_from_top;
            let pe = p.pow(e);
            let component = &x.coords()[pos] % &pe;
            if component.is_zero() {
                continue;
            }
            let m = &factors[j];
            let cofactor = m / &pe;
            let inv = mod_inverse(&(&cofactor % &pe), &pe);
            out[j] = (&out[j] + component * inv * cofactor) % m;
        }
    }
    Ok(out)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&m).magnitude().clone()
}

/// `G/<x>` by Smith Normal Form.
pub fn quotient_by_snf(group: &AbelianGroup, x: &GroupElement) -> Result<CanonicalGroupKey> {
    let m = quotient_matrix(group, x)?;
    Ok(key_from_diagonal(group, &smith_normal_form(&m)))
}

/// Reads the cyclic factors `C_{s_i}` off an SNF diagonal whose entries all
/// divide `|G|`.
pub fn key_from_diagonal(group: &AbelianGroup, diag: &[BigUint]) -> CanonicalGroupKey {
    let mut key = CanonicalGroupKey::trivial();
    for p in group.primes() {
        key.insert_part(
            p.clone(),
            diag.iter()
                .filter(|s| !s.is_zero() && !s.is_one())
                .map(|s| numutil::nu(p, s)),
        );
    }
    key
}
