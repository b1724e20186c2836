//! Integer lattices given by generator rows: echelon form and membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row echelon basis over ℤ: `(pivot column, row)` with increasing pivots;
/// each row vanishes left of its pivot.
pub(crate) fn echelon(mut rows: Vec<Vec<BigInt>>, width: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut basis = Vec::new();
    for col in 0..width {
        loop {
            let live: Vec<usize> = (0..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if live.len() <= 1 {
                if let Some(&r) = live.first() {
                    basis.push((col, rows.swap_remove(r)));
                }
                break;
            }
            let p = *live.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            let pivot = rows[p].clone();
            for &r in &live {
                if r == p {
                    continue;
                }
                let q = rows[r][col].div_floor(&pivot[col]);
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

pub(crate) fn contains(basis: &[(usize, Vec<BigInt>)], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for (c, row) in basis {
        let (q, r) = v[*c].div_rem(&row[*c]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    v.iter().all(Zero::is_zero)
}
