//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::poly::Q;

/// Reduced row echelon form in place; returns the pivot columns. Rows that
/// reduce to zero are removed.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = Q::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let m = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &m * p;
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

/// Basis of `{c : Σ_i c_i · cols[i] = 0}` where each entry of `cols` is a
/// column vector of the same length.
pub fn column_kernel(cols: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cols[0].len();
    let mut rows: Vec<Vec<Q>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&fcol| {
            let mut v = vec![Q::zero(); n];
            v[fcol] = Q::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[fcol].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::poly::q;

    #[test]
    fn rank_and_kernel() {
        let mut rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        let piv = rref(&mut rows);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rows, vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]]);
        // columns (1,0), (0,1), (1,1): kernel spanned by (−1, −1, 1)
        let k = column_kernel(&[vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]]);
        assert_eq!(k, vec![vec![q(-1), q(-1), q(1)]]);
    }
}
