//! Exact dense linear algebra over ℚ(i).

use crate::error::{Error, Result};
use crate::scalar::C;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<C>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        for c in col..m[row].len() {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..m[r].len() {
                    let t = &m[row][c] * &f;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<C>]) -> usize {
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut m = rows.to_vec();
    rref(&mut m, n).len()
}

/// Solve `A x = b`. With `unique`, rank deficiency is an error; otherwise free
/// variables are set to zero.
pub fn solve(a: &[Vec<C>], b: &[C], ncols: usize, unique: bool) -> Result<Vec<C>> {
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.resize(ncols, C::zero());
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    for r in pivots.len()..m.len() {
        if !m[r][ncols].is_zero() {
            return Err(Error::Inconsistent(format!("row {r}")));
        }
    }
    if unique && pivots.len() < ncols {
        return Err(Error::Underdetermined(format!("rank {} < {} unknowns", pivots.len(), ncols)));
    }
    let mut x = vec![C::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Ok(x)
}

pub fn det(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = C::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return C::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d = &d * &a[col][col];
        let inv = a[col][col].inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let t = &a[col][c] * &f;
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    d
}

/// Positive semidefiniteness of a Hermitian matrix via all principal minors.
pub fn is_psd(m: &[Vec<C>]) -> bool {
    let n = m.len();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<C>> =
            idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let d = det(&sub);
        if !d.is_real() || d.re < num_rational::BigRational::from_integer(0.into()) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> C {
        C::int(n)
    }

    #[test]
    fn solve_small() {
        let a = vec![vec![c(2), c(1)], vec![c(1), c(3)]];
        let x = solve(&a, &[c(3), c(5)], 2, true).unwrap();
        assert_eq!(x, vec![C::frac(4, 5), C::frac(7, 5)]);
        let sing = vec![vec![c(1), c(1)], vec![c(2), c(2)]];
        assert!(matches!(solve(&sing, &[c(1), c(2)], 2, true), Err(Error::Underdetermined(_))));
        assert!(solve(&sing, &[c(1), c(3)], 2, false).is_err());
        assert_eq!(rank(&sing), 1);
    }

    #[test]
    fn determinants_and_psd() {
        let m = vec![vec![c(2), C::i()], vec![-C::i(), c(1)]];
        assert_eq!(det(&m), c(1));
        assert!(is_psd(&m));
        let ones = vec![vec![c(1), c(1)], vec![c(1), c(1)]];
        assert!(is_psd(&ones));
        let bad = vec![vec![c(1), c(2)], vec![c(2), c(1)]];
        assert!(!is_psd(&bad));
    }
}
