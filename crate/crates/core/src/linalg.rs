//! Exact integer matrix rank.
//!
//! Boundary matrices of order complexes are sparse with ±1 entries. Rows are
//! reduced one at a time against an echelon basis keyed by leading column,
//! using fraction-free row combinations and dividing out the content after
//! every step so entries stay small. All arithmetic is checked.

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A sparse row: `(column, value)` pairs with strictly increasing columns and
/// no zero values.
pub type SparseRow = Vec<(usize, i64)>;

type Row = Vec<(usize, i128)>;

fn normalize(row: &mut Row) {
    let g = row.iter().fold(0i128, |g, &(_, v)| g.gcd(&v));
    if g > 1 {
        for (_, v) in row.iter_mut() {
            *v /= g;
        }
    }
    if row.first().is_some_and(|&(_, v)| v < 0) {
        for (_, v) in row.iter_mut() {
            *v = -*v;
        }
    }
}

/// `a·x − b·y` on sparse rows.
fn combine(a: i128, x: &Row, b: i128, y: &Row) -> Result<Row> {
    let over = || Error::Overflow("sparse elimination");
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some(&(cx, vx)), Some(&(cy, _))) if cx < cy => {
                i += 1;
                (cx, a.checked_mul(vx).ok_or_else(over)?)
            }
            (Some(&(cx, _)), Some(&(cy, vy))) if cy < cx => {
                j += 1;
                (cy, b.checked_mul(vy).ok_or_else(over)?.checked_neg().ok_or_else(over)?)
            }
            (Some(&(cx, vx)), Some(&(_, vy))) => {
                i += 1;
                j += 1;
                let l = a.checked_mul(vx).ok_or_else(over)?;
                let r = b.checked_mul(vy).ok_or_else(over)?;
                (cx, l.checked_sub(r).ok_or_else(over)?)
            }
            (Some(&(cx, vx)), None) => {
                i += 1;
                (cx, a.checked_mul(vx).ok_or_else(over)?)
            }
            (None, Some(&(cy, vy))) => {
                j += 1;
                (cy, b.checked_mul(vy).ok_or_else(over)?.checked_neg().ok_or_else(over)?)
            }
            (None, None) => unreachable!(),
        };
        if v != 0 {
            out.push((col, v));
        }
    }
    Ok(out)
}

/// Incremental row echelon form over ℚ with integer rows.
#[derive(Debug, Default)]
pub struct Echelon {
    pivots: HashMap<usize, Row>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the basis; returns whether it was independent.
    pub fn insert(&mut self, row: &[(usize, i64)]) -> Result<bool> {
        let mut r: Row = row.iter().filter(|&&(_, v)| v != 0).map(|&(c, v)| (c, v as i128)).collect();
        r.sort_unstable_by_key(|&(c, _)| c);
        normalize(&mut r);
        while let Some(&(lead, lv)) = r.first() {
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, r);
                    return Ok(true);
                }
                Some(p) => {
                    let pv = p[0].1;
                    let g = pv.gcd(&lv);
                    r = combine(pv / g, &r, lv / g, p)?;
                    normalize(&mut r);
                }
            }
        }
        Ok(false)
    }
}

pub fn rank_sparse(rows: &[SparseRow]) -> Result<usize> {
    let mut ech = Echelon::new();
    for row in rows {
        ech.insert(row)?;
    }
    Ok(ech.rank())
}

/// Dense Bareiss fraction-free elimination; exact for matrices whose minors
/// fit in `i128`.
pub fn rank_dense_bareiss(matrix: &[Vec<i64>]) -> Result<usize> {
    let over = || Error::Overflow("Bareiss elimination");
    let mut m: Vec<Vec<i128>> =
        matrix.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let a = m[rank][col].checked_mul(m[r][c]).ok_or_else(over)?;
                let b = m[r][col].checked_mul(m[rank][c]).ok_or_else(over)?;
                m[r][c] = a.checked_sub(b).ok_or_else(over)? / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}
