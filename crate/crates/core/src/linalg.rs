//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::exact_angles::Rat;

/// Affine solution set `particular + span(null_basis)` of `A·u = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rat>,
    pub null_basis: Vec<Vec<Rat>>,
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A·u = b` exactly. `None` when inconsistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat]) -> Option<AffineSolution> {
    let n = a.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v = row.clone();
            v.push(rhs.clone());
            v
        })
        .collect();
    let pivots = rref(&mut rows, n);
    // Inconsistent iff a pivot landed in the augmented column.
    for row in rows.iter().skip(pivots.len()) {
        if !row[n].is_zero() {
            return None;
        }
    }
    let mut particular = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let null_basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][fc].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, null_basis })
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let n = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    rref(&mut rows, n).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_angles::rint;

    #[test]
    fn unique_and_family() {
        let a = vec![vec![rint(1), rint(1)], vec![rint(1), rint(-1)]];
        let s = solve_affine(&a, &[rint(3), rint(1)]).unwrap();
        assert_eq!(s.particular, vec![rint(2), rint(1)]);
        assert!(s.null_basis.is_empty());
        let a = vec![vec![rint(1), rint(1)]];
        let s = solve_affine(&a, &[rint(3)]).unwrap();
        assert_eq!(s.null_basis.len(), 1);
        let a = vec![vec![rint(1), rint(1)], vec![rint(2), rint(2)]];
        assert!(solve_affine(&a, &[rint(3), rint(5)]).is_none());
    }
}
