//! Exact rank computations over the rationals.
//!
//! Two independent routes are provided: a dense Bareiss elimination and a
//! sparse incremental echelon that keeps every stored row primitive. Both
//! work on integer rows obtained by clearing denominators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{denominator_lcm, Rational};

/// Scales a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(row.iter());
    row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
}

/// Rank of a dense integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Incremental row echelon over the integers. Rows are reduced against
/// stored pivots by cross-multiplication and divided by their content, so
/// the span is tracked exactly without rational arithmetic.
#[derive(Default, Debug, Clone)]
pub struct SparseEchelon {
    pivots: HashMap<usize, Vec<(usize, BigInt)>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts a sparse row given as (column, value) pairs sorted by column.
    /// Returns `true` if the row was independent of the stored span.
    pub fn insert(&mut self, row: Vec<(usize, BigInt)>) -> bool {
        let mut row: Vec<(usize, BigInt)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        loop {
            let Some(lead) = row.first().map(|t| t.0) else {
                return false;
            };
            match self.pivots.get(&lead) {
                None => {
                    make_primitive(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(pivot) => {
                    row = eliminate(&row, pivot);
                    make_primitive(&mut row);
                }
            }
        }
    }
}

fn make_primitive(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    let negate = row.first().is_some_and(|(_, v)| v.is_negative());
    if g.is_zero() {
        return;
    }
    let g = if negate { -g } else { g };
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

// Returns a·row − b·pivot with the shared leading entry cancelled.
fn eliminate(row: &[(usize, BigInt)], pivot: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let g = row[0].1.gcd(&pivot[0].1);
    let a = &pivot[0].1 / &g;
    let b = &row[0].1 / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|t| t.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|t| t.0).unwrap_or(usize::MAX);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, &a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &a * &row[i - 1].1 - &b * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Rank of a dense rational matrix via Bareiss.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    bareiss_rank(rows.iter().map(|r| clear_denominators(r)).collect())
}

/// Rank of a dense rational matrix via the sparse echelon route.
pub fn rational_rank_sparse(rows: &[Vec<Rational>]) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        let ints = clear_denominators(r);
        e.insert(ints.into_iter().enumerate().collect());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rational_rank(&a), 2);
        assert_eq!(rational_rank_sparse(&a), 2);
        let id = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(rational_rank(&id), 2);
        assert_eq!(rational_rank(&[]), 0);
        assert_eq!(rational_rank(&m(&[&[0, 0, 0]])), 0);
    }

    #[test]
    fn rank_needs_pivot_search() {
        // First column is zero and the second needs a row swap.
        let a = m(&[&[0, 0, 1], &[0, 3, 1], &[0, 6, 2]]);
        assert_eq!(rational_rank(&a), 2);
        assert_eq!(rational_rank_sparse(&a), 2);
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]];
        assert_eq!(rational_rank(&a), 1);
        assert_eq!(rational_rank_sparse(&a), 1);
    }

    #[test]
    fn full_rank_hilbert_like() {
        let n = 6;
        let a: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| rat(1, (i + j + 1) as i64)).collect()).collect();
        assert_eq!(rational_rank(&a), n);
        assert_eq!(rational_rank_sparse(&a), n);
    }
}
