//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::polyring::Rat;

/// Reduces `rows` in place to reduced row echelon form and returns the
/// pivot column of each remaining row. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        if !inv.is_one() {
            for v in rows[r].iter_mut().skip(col) {
                *v *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{ v : M v = 0 }`, one vector per free column, each with a one
/// in its free column.
pub fn null_space(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut rows, ncols);
    let mut basis = Vec::new();
    let mut pi = 0;
    for free in 0..ncols {
        if pi < pivots.len() && pivots[pi] == free {
            pi += 1;
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rank(mut rows: Vec<Vec<Rat>>, ncols: usize) -> usize {
    rref(&mut rows, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn row(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&n| rat(n, 1)).collect()
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = vec![row(&[1, 2, 3]), row(&[2, 4, 6])];
        let ns = null_space(m.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &m {
                let dot: Rat = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = vec![row(&[1, 1]), row(&[1, -1]), row(&[3, 0])];
        assert!(null_space(m.clone(), 2).is_empty());
        assert_eq!(rank(m, 2), 2);
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![row(&[2, 1]), row(&[1, 1])];
        assert_eq!(inverse(&m).unwrap(), vec![row(&[1, -1]), row(&[-1, 2])]);
        assert!(inverse(&[row(&[1, 2]), row(&[2, 4])]).is_none());
    }

    #[test]
    fn rref_normalizes_pivots() {
        let mut m = vec![row(&[0, 2, 4]), row(&[3, 0, 3])];
        let piv = rref(&mut m, 3);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m[0], row(&[1, 0, 1]));
        assert_eq!(m[1], row(&[0, 1, 2]));
    }
}
